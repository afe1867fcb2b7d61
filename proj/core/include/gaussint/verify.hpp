#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>

namespace gaussint {

enum class Outcome { pass, fail, inconclusive };

const char* to_string(Outcome outcome);

/// Result of a property check. A margin is (LHS - RHS) normalized as the
/// check documents; the report passes while every margin is >= -tolerance.
struct VerifyReport {
    std::string check;
    Outcome outcome = Outcome::pass;
    long long trials = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    double tolerance = 0.0;
    std::string witness;  // serialized inputs at the worst margin
    std::uint64_t seed = 0;
    std::string note;

    bool passed() const noexcept { return outcome == Outcome::pass; }

    /// Records one trial. The witness callback only runs when this trial is the new worst.
    void observe(double margin, const std::function<std::string()>& witness_fn = {});
};

VerifyReport make_report(std::string check, double tolerance, std::uint64_t seed = 0);

/// Deterministic min-reduction; ties keep the earlier report's witness.
/// An inconclusive part makes the whole inconclusive unless some part failed.
VerifyReport merge(std::span<const VerifyReport> parts, std::string check);

std::string csv_header();
std::string csv_row(const VerifyReport& report);
std::string summary(const VerifyReport& report);

/// Shortest round-trip decimal form of x ("%.17g" trimmed).
std::string format_double(double x);

}  // namespace gaussint
