#include "gaussint/verify.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace gaussint {

const char* to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::pass: return "pass";
        case Outcome::fail: return "fail";
        case Outcome::inconclusive: return "inconclusive";
    }
    return "?";
}

void VerifyReport::observe(double margin, const std::function<std::string()>& witness_fn) {
    ++trials;
    // NaN margins are violations.
    const bool worse = std::isnan(margin) || margin < worst_margin;
    if (worse && !std::isnan(worst_margin)) {
        worst_margin = margin;
        if (witness_fn) witness = witness_fn();
    }
    if (std::isnan(margin) || margin < -tolerance) outcome = Outcome::fail;
}

VerifyReport make_report(std::string check, double tolerance, std::uint64_t seed) {
    VerifyReport r;
    r.check = std::move(check);
    r.tolerance = tolerance;
    r.seed = seed;
    return r;
}

VerifyReport merge(std::span<const VerifyReport> parts, std::string check) {
    VerifyReport out;
    out.check = std::move(check);
    bool failed = false;
    bool inconclusive = false;
    bool first = true;
    for (const auto& p : parts) {
        out.trials += p.trials;
        if (first) {
            out.tolerance = p.tolerance;
            out.seed = p.seed;
            first = false;
        }
        const bool worse = std::isnan(p.worst_margin) ? !std::isnan(out.worst_margin)
                                                      : p.worst_margin < out.worst_margin;
        if (worse) {
            out.worst_margin = p.worst_margin;
            out.witness = p.witness;
        }
        failed = failed || p.outcome == Outcome::fail;
        inconclusive = inconclusive || p.outcome == Outcome::inconclusive;
        if (!p.note.empty() && out.note.find(p.note) == std::string::npos) {
            out.note += (out.note.empty() ? "" : "; ") + p.note;
        }
    }
    out.outcome = failed ? Outcome::fail : inconclusive ? Outcome::inconclusive : Outcome::pass;
    return out;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    for (int prec = 6; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_header() { return "check,trials,worst_margin,tolerance,seed,outcome"; }

std::string csv_row(const VerifyReport& r) {
    return r.check + "," + std::to_string(r.trials) + "," + format_double(r.worst_margin) + "," +
           format_double(r.tolerance) + "," + std::to_string(r.seed) + "," + to_string(r.outcome);
}

std::string summary(const VerifyReport& r) {
    std::string s = r.check + ": " + to_string(r.outcome) + " (" + std::to_string(r.trials) +
                    " trials, worst margin " + format_double(r.worst_margin) + ", tolerance " +
                    format_double(r.tolerance) + ")";
    if (!r.note.empty()) s += " [" + r.note + "]";
    if (r.outcome != Outcome::pass && !r.witness.empty()) s += "\n  witness: " + r.witness;
    return s;
}

}  // namespace gaussint
