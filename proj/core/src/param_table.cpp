#include "gaussint/param_table.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gaussint {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

double parse_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
        throw ConfigError(what + ": '" + text + "' is not a number");
    }
    return value;
}

long long parse_int(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const long long value = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
        throw ConfigError(what + ": '" + text + "' is not an integer");
    }
    return value;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
    if (out.empty()) throw ConfigError(what + ": empty list");
    return out;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

ParamTable ParamTable::parse(const std::string& text, const std::string& source) {
    ParamTable table;
    table.source_ = source;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
        if (table.values_.count(key)) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        table.values_[key] = value;
    }
    return table;
}

ParamTable ParamTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path);
}

void ParamTable::set(const std::string& key, const std::string& value) { values_[key] = value; }

bool ParamTable::contains(const std::string& key) const { return values_.count(key) != 0; }

void ParamTable::erase(const std::string& key) {
    values_.erase(key);
    consumed_.erase(key);
}

std::optional<std::string> ParamTable::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    consumed_.insert(key);
    return it->second;
}

std::string ParamTable::require(const std::string& key) const {
    auto value = get(key);
    if (!value) throw ConfigError(source_ + ": missing required key '" + key + "'");
    return *value;
}

double ParamTable::get_double(const std::string& key, double fallback) const {
    const auto value = get(key);
    return value ? parse_double(*value, key) : fallback;
}

double ParamTable::require_double(const std::string& key) const { return parse_double(require(key), key); }

long long ParamTable::get_int(const std::string& key, long long fallback) const {
    const auto value = get(key);
    return value ? parse_int(*value, key) : fallback;
}

long long ParamTable::require_int(const std::string& key) const { return parse_int(require(key), key); }

std::vector<double> ParamTable::require_double_list(const std::string& key) const {
    return parse_double_list(require(key), key);
}

ParamTable ParamTable::section(const std::string& prefix) const {
    ParamTable sub;
    sub.source_ = source_ + "[" + prefix + "]";
    const std::string dotted = prefix + ".";
    for (const auto& [key, value] : values_) {
        if (key.rfind(dotted, 0) == 0) {
            sub.values_[key.substr(dotted.size())] = value;
            consumed_.insert(key);
        }
    }
    return sub;
}

void ParamTable::require_all_consumed() const {
    std::string unknown;
    for (const auto& [key, value] : values_) {
        if (!consumed_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
    }
    if (!unknown.empty()) throw ConfigError(source_ + ": unknown key(s): " + unknown);
}

std::string ParamTable::serialize() const {
    std::string out;
    for (const auto& [key, value] : values_) out += key + " = " + value + "\n";
    return out;
}

}  // namespace gaussint
