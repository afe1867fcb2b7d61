// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "gaussint/local_time.hpp"
#include "gaussint/moments.hpp"
#include "gaussint/operator_config.hpp"
#include "gaussint/parallel.hpp"
#include "gaussint/self_intersection.hpp"
#include "gaussint/suites.hpp"
#include "gaussint_tools/harness.hpp"

using namespace gaussint;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Verdict()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && secs > limit_s) {
        o.pass = false;
        o.detail += fmt(" [over time limit %.0f s]", limit_s);
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s  %-34s %8.2f s  %s\n", id, o.pass ? "PASS" : "FAIL", title, secs, o.detail.c_str());
    std::fflush(stdout);
}

Verdict suite_outcome(const VerifyReport& r) {
    return {r.passed(), summary(r)};
}

}  // namespace

int main() {
    set_thread_count(8);

    criterion(1, "gram lower bound suite", 10.0, [] { return suite_outcome(suite_gram_lower_bound(kSeed)); });
    criterion(2, "inverse gram quadratic suite", 0, [&] { return suite_outcome(suite_inverse_gram_quadratic(kSeed)); });
    criterion(3, "density bound suite", 0, [&] { return suite_outcome(suite_density_bound(kSeed)); });
    criterion(4, "projection transfer suite", 0, [&] { return suite_outcome(suite_projection_transfer(kSeed)); });
    criterion(5, "indicator gram suite", 0, [&] { return suite_outcome(suite_indicator_gram(kSeed)); });
    criterion(6, "delta product suite", 0, [&] { return suite_outcome(suite_delta_product(kSeed)); });

    criterion(7, "wiener local time at 0", 60.0, [] {
        const MCEstimate e = mc_local_time(builtin::identity(GridSpec(4096)), 0.0, 1.0, 1e-3, 2000, kSeed);
        const double target = std::sqrt(2.0 / std::numbers::pi);
        const double z = (e.mean - target) / e.se;
        return Verdict{std::abs(z) <= 3.0, fmt("mean %.6f se %.5f target %.6f z %.2f", e.mean, e.se, target, z)};
    });

    criterion(8, "exact second moment", 0, [] {
        const GridSpec g(512);
        const L2Operator id = builtin::identity(g);
        const MomentQuadrature m = second_moment_exact(id, 2);
        const double target = 8.0 / (3.0 * std::sqrt(2.0 * std::numbers::pi));
        const double rel = std::abs(m.value - target) / target;
        const MCEstimate mc = mc_selfoverlap(id, 1e-3, 1000, kSeed);
        const double bias = selfoverlap_bias_bound(id, 1e-3, 2);
        const double gap = std::abs(mc.mean - m.value);
        return Verdict{rel <= 1e-5 && gap <= 3 * mc.se + bias,
                       fmt("M %.9f rel %.1e; mc %.5f se %.5f |diff| %.5f <= %.5f", m.value, rel, mc.mean, mc.se,
                           gap, 3 * mc.se + bias)};
    });

    criterion(9, "local time convergence I + K/n", 0, [] {
        const GridSpec g(256);
        const L2Operator id = builtin::identity(g);
        const L2Operator k = reference_volterra(g);
        const int ns[] = {1, 2, 4, 8, 16, 32, 64};
        const auto pts =
            lt_convergence_experiment([&](int n) { return linear_combination(1.0, id, 1.0 / n, k); }, id, ns, 2);
        bool ok = true;
        std::string vals;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            ok = ok && pts[i].value >= -1e-8;
            if (i > 0) ok = ok && pts[i].value < pts[i - 1].value;
            vals += fmt(" %.4g", pts[i].value);
        }
        const double ratio = pts.back().value / pts.front().value;
        ok = ok && ratio <= 0.05;
        return Verdict{ok, fmt("ratio %.4f; values", ratio) + vals};
    });

    criterion(10, "planar trichotomy", 0, [] {
        const double v2 = et2_planar_exact(1000, 2).value;
        const bool finite = std::abs(v2 - 0.08914) <= 0.01 * 0.08914;
        const double sweep[] = {10, 30, 100, 300, 1000};
        const AsymptoticVerdict z = classify_limit(1.5, sweep);
        const bool zero = z.classified_limit == LimitClass::zero && z.values_at.back().second < 1e-6;
        const AsymptoticVerdict d = classify_limit(3.0, sweep);
        const bool div = d.classified_limit == LimitClass::divergent && d.values_at.back().second > 1.0 &&
                         d.r_squared >= 0.99;
        return Verdict{finite && zero && div,
                       fmt("alpha=2: %.8f; alpha=1.5 at 1e3: %.3e (%s); alpha=3 at 1e3: %.4f R2 %.4f (%s)", v2,
                           z.values_at.back().second, to_string(z.classified_limit), d.values_at.back().second,
                           d.r_squared, to_string(d.classified_limit))};
    });

    criterion(11, "planar MC vs direct quadrature", 300.0, [] {
        T2Options o;
        o.n_cells = 2048;
        o.eps = 5e-4;
        o.reps = 4000;
        o.seed = kSeed;
        o.alpha = 2.0;
        const double a[] = {3.0, 0.0};
        const T2Estimate e = mc_t2_conditional(a, 1, o);
        const double direct = et2_planar_direct(3.0, 2.0).value;
        const double z = (e.mc.mean - direct) / e.mc.se;
        return Verdict{std::abs(z) <= 3.0,
                       fmt("mc %.6f se %.6f direct %.6f z %.2f (eps bias %.2e)", e.mc.mean, e.mc.se, direct, z,
                           e.eps_bias)};
    });

    criterion(12, "1d decay slope and negative control", 0, [] {
        const double lo = et2_1d_exact(10).value, hi = et2_1d_exact(1000).value;
        const double slope = std::log(hi / lo) / std::log(100.0);
        const double a[] = {10, 20, 50, 100, 200, 500, 1000};
        const VerifyReport ok = theorem10_bound_certificate(1, a, 0.9, {});
        const VerifyReport neg = theorem10_bound_certificate(1, a, 1.2, {});
        const bool pass = slope >= -1.05 && slope <= -0.9 && ok.passed() && !neg.passed();
        return Verdict{pass, fmt("slope %.4f; beta 0.9 %s; beta 1.2 %s", slope, ok.passed() ? "pass" : "fail",
                                 neg.passed() ? "pass" : "fail")};
    });

    criterion(13, "byte-identical CSV, 1 vs 8 threads", 0, [] {
        std::vector<std::pair<std::string, std::string>> runs;
        for (const auto& sub : harness::config_subcommands()) runs.emplace_back(sub, "smoke");
        runs.emplace_back("verify", "desk");
        runs.emplace_back("lt-moments", "desk");
        std::string bad;
        for (const auto& [sub, name] : runs) {
            harness::ConfigSources src;
            src.preset = name;
            const ParamTable cfg = harness::resolve_config(sub, src);
            set_thread_count(1);
            const std::string one = harness::run(sub, cfg).csv;
            set_thread_count(8);
            const std::string eight = harness::run(sub, cfg).csv;
            if (one != eight || one.empty()) bad += " " + sub + "/" + name;
        }
        return Verdict{bad.empty(), bad.empty() ? fmt("%zu preset runs identical", runs.size()) : "differs:" + bad};
    });

    std::printf("%d of 13 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
