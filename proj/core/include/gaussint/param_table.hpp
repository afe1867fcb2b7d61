#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaussint {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Strict `key = value` table. Every lookup marks its key as consumed;
/// require_all_consumed() rejects whatever the caller never asked for.
class ParamTable {
public:
    ParamTable() = default;

    /// Parses `key = value` lines. '#' starts a comment, blank lines are
    /// ignored, duplicate keys and lines without '=' are errors.
    static ParamTable parse(const std::string& text, const std::string& source = "<config>");
    static ParamTable load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool contains(const std::string& key) const;
    void erase(const std::string& key);

    std::optional<std::string> get(const std::string& key) const;
    std::string require(const std::string& key) const;

    double get_double(const std::string& key, double fallback) const;
    double require_double(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    long long require_int(const std::string& key) const;
    std::vector<double> require_double_list(const std::string& key) const;

    /// Sub-table of keys starting with `prefix.`, with the prefix stripped.
    /// Those keys count as consumed in this table.
    ParamTable section(const std::string& prefix) const;

    void require_all_consumed() const;

    /// Canonical text form: sorted keys, one `key = value` per line.
    std::string serialize() const;

    const std::map<std::string, std::string>& entries() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;
    std::string source_ = "<config>";
};

double parse_double(const std::string& text, const std::string& what);
long long parse_int(const std::string& text, const std::string& what);
std::vector<double> parse_double_list(const std::string& text, const std::string& what);

/// 64-bit FNV-1a, used for config provenance hashes.
std::uint64_t fnv1a64(const std::string& text);

}  // namespace gaussint
