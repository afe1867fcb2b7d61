#include "gaussint/self_intersection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gaussint/gauss_sim.hpp"
#include "gaussint/gram.hpp"
#include "gaussint/l2operator.hpp"
#include "gaussint/lemma_checks.hpp"
#include "gaussint/local_time.hpp"
#include "gaussint/pair_kernel.hpp"
#include "gaussint/parallel.hpp"
#include "gaussint/random.hpp"

namespace gaussint {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr double kTailWindow = 80.0;

double level_tolerance(int refinement) {
    if (refinement < 0) throw std::invalid_argument("refinement must be >= 0");
    return std::max(1e-6 * std::pow(10.0, -refinement), 1e-13);
}

/// lo, hi and the points lo + s 2^k, hi - s 2^k strictly inside (lo, hi).
std::vector<double> geometric_breaks(double lo, double hi, std::initializer_list<double> from_lo,
                                     std::initializer_list<double> from_hi) {
    std::vector<double> out{lo, hi};
    auto add = [&](double x) {
        if (x > lo && x < hi) out.push_back(x);
    };
    for (double s : from_lo) {
        if (!(s > 0.0)) continue;
        for (double d = s; d < hi - lo; d *= 2.0) add(lo + d);
    }
    for (double s : from_hi) {
        if (!(s > 0.0)) continue;
        for (double d = s; d < hi - lo; d *= 2.0) add(hi - d);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Value at `refinement` with error |v(r) - v(r-1)| (r = 0 compares with r = 1).
template <class F>
QuadResult refined(F&& at_level, int refinement, const char* what) {
    const QuadResult fine = at_level(refinement);
    const QuadResult other = at_level(refinement == 0 ? 1 : refinement - 1);
    QuadResult out{fine.value, std::abs(fine.value - other.value) + fine.error};
    if (!std::isfinite(out.value) || out.error > 1e-3 * std::abs(out.value) + 1e-15) {
        throw std::runtime_error(std::string(what) + ": quadrature did not converge under refinement");
    }
    return out;
}

/// int_g^1 (1 - D) (2 pi D (1 - D))^{-1/2} exp(-a^2 D / (2 (1 - D))) dD with D = sin^2 q.
QuadResult et2_1d_level(double a, double g, int level) {
    const double q_lo = std::asin(std::sqrt(g));
    const double q_hi = kPi / 2.0;
    std::vector<double> breaks{q_lo, q_hi};
    if (a != 0.0) {
        for (double c = 0.125; c < 64.0; c *= 2.0) {
            const double q = std::atan(c / std::abs(a));
            if (q > q_lo && q < q_hi) breaks.push_back(q);
        }
    }
    std::sort(breaks.begin(), breaks.end());
    const double a2 = a * a;
    auto f = [a2](double q) {
        const double c = std::cos(q);
        const double t = std::tan(q);
        return 2.0 * kInvSqrt2Pi * c * c * std::exp(-0.5 * a2 * t * t);
    };
    return integrate_pieces(f, breaks, level_tolerance(level), 15);
}

QuadResult et2_planar_level(double a_norm, double gap, int level) {
    const double a2 = a_norm * a_norm;
    const double lower = a2 * gap / (1.0 - gap);
    const double u_lo = std::log(lower);
    const double u_hi = std::log(lower + kTailWindow);
    std::vector<double> breaks{u_lo, u_hi};
    for (double u = std::ceil(u_lo); u < u_hi; u += 1.0) {
        if (u > u_lo) breaks.push_back(u);
    }
    const double u_a = std::log(a2);
    if (u_a > u_lo && u_a < u_hi) breaks.push_back(u_a);
    std::sort(breaks.begin(), breaks.end());
    auto f = [a2](double u) {
        const double y = std::exp(u);
        return a2 / (a2 + y) * std::exp(-0.5 * y) / (2.0 * kPi);
    };
    QuadResult r = integrate_pieces(f, breaks, level_tolerance(level), 15);
    r.error += 2.0 * std::exp(-0.5 * (lower + kTailWindow));
    return r;
}

QuadResult et2_planar_direct_level(double a_norm, double gap, int level) {
    const double a2 = a_norm * a_norm;
    const double tol = level_tolerance(level);
    // D * density at increment length D, for the substitution D = e^u.
    auto scaled_density = [a2](double d) {
        const double rest = 1.0 - d;
        if (rest <= 0.0) return 0.0;
        return std::exp(-0.5 * a2 * d / rest) / (2.0 * kPi * rest);
    };
    const double u_lo = std::log(gap);
    const double u_a = -std::log(a2);
    // x = 1 - t1 is the largest admissible increment for this t1.
    auto inner = [&](double x) {
        const double u_hi = std::log(x);
        if (u_hi <= u_lo) return 0.0;
        std::vector<double> breaks{u_lo, u_hi};
        for (double u = std::ceil(u_lo); u < u_hi; u += 1.0) {
            if (u > u_lo) breaks.push_back(u);
        }
        if (u_a > u_lo && u_a < u_hi) breaks.push_back(u_a);
        std::sort(breaks.begin(), breaks.end());
        auto f = [&](double u) { return scaled_density(std::exp(u)); };
        return integrate_pieces(f, breaks, 0.1 * tol, 12).value;
    };
    const auto outer_breaks = geometric_breaks(gap, 1.0, {1.0 / a2, gap * 1e-3}, {1e-3});
    return integrate_pieces(inner, outer_breaks, tol, 12);
}

/// (1 - D) E f_eps(increment over D), dim 1 or 2.
double regularized_integrand(int dim, double a2, double eps, double d) {
    const double var = d * (1.0 - d) + eps;
    const double e = std::exp(-0.5 * a2 * d * d / var);
    return (1.0 - d) * (dim == 1 ? e / std::sqrt(2.0 * kPi * var) : e / (2.0 * kPi * var));
}

std::vector<double> regularized_breaks(double a2, double gap, double eps) {
    return geometric_breaks(gap, 1.0, {eps, a2 > 0.0 ? 1.0 / a2 : 0.0}, {eps});
}

double regularized_expectation(int dim, double a_norm, double gap, double eps) {
    const double a2 = a_norm * a_norm;
    const auto breaks = regularized_breaks(a2, gap, eps);
    auto f = [=](double d) { return regularized_integrand(dim, a2, eps, d); };
    return integrate_pieces(f, breaks, 1e-10, 15).value;
}

double regularized_sup(int dim, double a_norm, double gap, double eps) {
    const double a2 = a_norm * a_norm;
    double best = 0.0;
    for (double d : regularized_breaks(a2, gap, eps)) best = std::max(best, regularized_integrand(dim, a2, eps, d));
    constexpr int kScan = 4096;
    for (int i = 0; i <= kScan; ++i) {
        best = std::max(best, regularized_integrand(dim, a2, eps, gap + (1.0 - gap) * i / kScan));
    }
    return best;
}

double region_gap(double a_norm, const T2Options& opt) {
    return opt.alpha ? make_condition_triangle(a_norm, *opt.alpha).gap() : 0.0;
}

double euclid(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
}

}  // namespace

double ConditionTriangle::gap() const {
    if (a_norm == 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(a_norm, -alpha);
}

bool ConditionTriangle::nonempty() const { return gap() < 1.0; }

double ConditionTriangle::area() const {
    if (!nonempty()) return 0.0;
    const double r = 1.0 - gap();
    return 0.5 * r * r;
}

ConditionTriangle make_condition_triangle(double a_norm, double alpha) {
    if (!(a_norm >= 0.0) || !(alpha > 0.0)) {
        throw std::invalid_argument("condition triangle needs a_norm >= 0 and alpha > 0");
    }
    ConditionTriangle tri{a_norm, alpha};
    if (!tri.nonempty()) {
        throw std::invalid_argument("condition triangle is empty: |a|^-alpha = " + format_double(tri.gap()) +
                                    " >= 1");
    }
    return tri;
}

QuadResult et2_1d_exact(double a, int refinement) {
    if (!std::isfinite(a)) throw std::invalid_argument("et2_1d_exact: a must be finite");
    return refined([a](int r) { return et2_1d_level(a, 0.0, r); }, refinement, "et2_1d_exact");
}

double et2_1d_regularized(double a, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("et2_1d_regularized: eps must be positive");
    return regularized_expectation(1, std::abs(a), 0.0, eps);
}

QuadResult et2_planar_exact(double a_norm, double alpha, int refinement) {
    const double gap = make_condition_triangle(a_norm, alpha).gap();
    return refined([=](int r) { return et2_planar_level(a_norm, gap, r); }, refinement, "et2_planar_exact");
}

QuadResult et2_planar_direct(double a_norm, double alpha, int refinement) {
    const double gap = make_condition_triangle(a_norm, alpha).gap();
    return refined([=](int r) { return et2_planar_direct_level(a_norm, gap, r); }, refinement,
                   "et2_planar_direct");
}

double et2_planar_regularized(double a_norm, double alpha, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("et2_planar_regularized: eps must be positive");
    return regularized_expectation(2, a_norm, make_condition_triangle(a_norm, alpha).gap(), eps);
}

int t2_min_gap(double a_norm, const T2Options& opt) {
    if (!opt.alpha) return 1;
    const double m = make_condition_triangle(a_norm, *opt.alpha).gap();
    const GridSpec grid(opt.n_cells);
    return std::max(1, static_cast<int>(std::ceil(m / grid.h() - 1e-9)));
}

std::vector<double> t2_samples(std::span<const double> a, const T2Options& opt) {
    const int dim = static_cast<int>(a.size());
    if (dim != 1 && dim != 2) throw std::invalid_argument("t2_samples: endpoint must have 1 or 2 coordinates");
    if (dim == 2 && !opt.alpha) throw std::invalid_argument("t2_samples: dim 2 needs alpha");
    if (opt.reps < 1) throw std::invalid_argument("t2_samples: reps must be >= 1");
    const GridSpec grid(opt.n_cells);
    require_bandwidth(grid, opt.eps);
    const double a_norm = euclid(a);
    const int gap = t2_min_gap(a_norm, opt);
    const double h = grid.h();
    const double norm = dim == 1 ? 1.0 / std::sqrt(2.0 * kPi * opt.eps) : 1.0 / (2.0 * kPi * opt.eps);
    const double ux = a_norm > 0.0 ? a[0] / a_norm : 1.0;
    const double uy = dim == 2 && a_norm > 0.0 ? a[1] / a_norm : 0.0;
    const int n = grid.n_cells();

    std::vector<double> out(static_cast<std::size_t>(opt.reps));
    parallel_for(out.size(), [&](std::size_t r) {
        std::vector<NoiseSample> noises;
        for (int d = 0; d < dim; ++d) noises.push_back(sample_noise(grid, opt.seed, 2 * r + static_cast<std::size_t>(d)));
        const GaussPath path = bridge_path(a, noises);
        // Left endpoints t_0 .. t_{n-1}.
        const std::span<const double> x(path.values[0].data(), static_cast<std::size_t>(n));
        double sum;
        if (dim == 1) {
            sum = pair_gauss_sum_1d(x, opt.eps, gap);
        } else {
            const std::span<const double> y(path.values[1].data(), static_cast<std::size_t>(n));
            sum = pair_gauss_sum_2d(x, y, opt.eps, gap, ux, uy);
        }
        out[r] = h * h * sum * norm;
    });
    return out;
}

T2Estimate mc_t2_conditional(std::span<const double> a, int p, const T2Options& opt) {
    if (p < 1) throw std::invalid_argument("mc_t2_conditional: p must be a positive integer");
    std::vector<double> samples = t2_samples(a, opt);
    if (p > 1) {
        for (double& s : samples) s = std::pow(s, p);
    }
    T2Estimate est;
    est.mc = mean_se(samples);
    const double a_norm = euclid(a);
    est.min_gap = t2_min_gap(a_norm, opt);
    if (p == 1) {
        const int dim = static_cast<int>(a.size());
        const double gap = region_gap(a_norm, opt);
        const double exact = dim == 2 ? et2_planar_exact(a_norm, *opt.alpha).value
                             : gap > 0.0 ? refined([&](int r) { return et2_1d_level(a_norm, gap, r); }, 2,
                                                   "et2_1d_exact")
                                               .value
                                         : et2_1d_exact(a_norm).value;
        est.eps_bias = regularized_expectation(dim, a_norm, gap, opt.eps) - exact;
        est.grid_bias = GridSpec(opt.n_cells).h() * regularized_sup(dim, a_norm, gap, opt.eps);
    } else {
        est.eps_bias = std::numeric_limits<double>::quiet_NaN();
        est.grid_bias = std::numeric_limits<double>::quiet_NaN();
    }
    return est;
}

const char* to_string(LimitClass c) {
    switch (c) {
        case LimitClass::finite: return "finite";
        case LimitClass::zero: return "zero";
        case LimitClass::divergent: return "divergent";
        case LimitClass::inconclusive: return "inconclusive";
    }
    return "?";
}

AsymptoticVerdict classify_values(double alpha, std::vector<std::pair<double, double>> values_at) {
    std::sort(values_at.begin(), values_at.end());
    AsymptoticVerdict v;
    v.alpha = alpha;
    v.values_at = values_at;
    const std::size_t n = values_at.size();
    if (n < 3 || !(values_at.front().first > 0.0) || values_at.back().first / values_at.front().first < 100.0) {
        return v;
    }

    // Least squares of value against ln a_norm.
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& [a, y] : values_at) {
        const double x = std::log(a);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double dn = static_cast<double>(n);
    const double cxx = sxx - sx * sx / dn;
    const double cxy = sxy - sx * sy / dn;
    const double cyy = syy - sy * sy / dn;
    v.slope = cxy / cxx;
    v.r_squared = cyy > 0.0 ? cxy * cxy / (cxx * cyy) : 0.0;

    bool decreasing = true, increasing = true;
    for (std::size_t i = 1; i < n; ++i) {
        decreasing = decreasing && values_at[i].second < values_at[i - 1].second;
        increasing = increasing && values_at[i].second > values_at[i - 1].second;
    }
    const double last = values_at.back().second;
    const double a_last = values_at.back().first;
    std::size_t ref = 0;
    while (ref + 1 < n && values_at[ref].first < a_last / 10.0 * (1.0 - 1e-12)) ++ref;
    if (ref == n - 1) ref = n - 2;
    const double rel_change = std::abs(last - values_at[ref].second) / std::abs(last);

    if (decreasing && last < 1e-6) {
        v.classified_limit = LimitClass::zero;
    } else if (last > 0.0 && values_at.back().first / values_at[ref].first >= 10.0 * (1.0 - 1e-12) &&
               rel_change < 0.01) {
        v.classified_limit = LimitClass::finite;
        v.limit_value = last;
    } else if (increasing && v.slope > 0.0 && v.r_squared >= 0.99) {
        v.classified_limit = LimitClass::divergent;
    }
    return v;
}

AsymptoticVerdict classify_limit(double alpha, std::span<const double> a_norms, int refinement) {
    std::vector<std::pair<double, double>> values(a_norms.size());
    parallel_for(values.size(), [&](std::size_t i) {
        values[i] = {a_norms[i], et2_planar_exact(a_norms[i], alpha, refinement).value};
    });
    return classify_values(alpha, std::move(values));
}

namespace {

/// Spot checks of the two ingredients of the moment bound, conditioned on w(1)
/// through Q = projection onto the complement of 1: the projection transfer
/// ||P 1|| <= ||P^Q h|| and Gamma^Q = Gamma(1, e) >= prod of partition lengths.
VerifyReport decay_ingredients(const CertificateOptions& opt) {
    const int trials = std::max(1, opt.ingredient_trials);
    std::vector<VerifyReport> parts(static_cast<std::size_t>(trials));
    parallel_for(parts.size(), [&](std::size_t i) {
        Rng rng(opt.seed, (std::uint64_t{99} << 32) | i);
        const GridSpec grid(64);
        const L2Vec one = cell_indicator(grid, 0, 64);
        const L2Operator q = builtin::complement_projection(one);
        const int k = rng.uniform_int(1, 4);
        std::vector<int> nodes;
        while (static_cast<int>(nodes.size()) < k) {
            const int t = rng.uniform_int(1, 63);
            if (std::find(nodes.begin(), nodes.end(), t) == nodes.end()) nodes.push_back(t);
        }
        std::sort(nodes.begin(), nodes.end());
        std::vector<L2Vec> es, qes;
        for (int t : nodes) {
            es.push_back(cell_indicator(grid, 0, t));
            qes.push_back(apply(q, es.back()));
        }

        // h in span{Q e_i} with (h, Q e_i) = (1, e_i).
        Eigen::VectorXd targets(k);
        for (int j = 0; j < k; ++j) targets[j] = inner(one, es[static_cast<std::size_t>(j)]);
        const Eigen::VectorXd c = solve_gram(qes, targets);
        L2Vec h = L2Vec::zero(grid);
        for (int j = 0; j < k; ++j) h += c[j] * qes[static_cast<std::size_t>(j)];
        const VerifyReport transfer = check_projection_transfer(q, es, one, h);

        std::vector<L2Vec> deltas = es;
        deltas.push_back(one);
        const VerifyReport gram = indicator_gram_bound(deltas);

        VerifyReport conditioned = make_report("gram_conditioned", 1e-9, opt.seed);
        std::vector<L2Vec> with_one{one};
        with_one.insert(with_one.end(), es.begin(), es.end());
        double prod = 1.0;
        int prev = 0;
        for (int t : nodes) {
            prod *= grid.node(t - prev);
            prev = t;
        }
        prod *= grid.node(64 - prev);
        const double gq = gram_det(qes);
        const double g1 = gram_det(with_one);
        auto witness = [&] { return describe(es); };
        conditioned.observe((gq - prod) / prod, witness);
        conditioned.observe(-std::abs(gq - g1) / std::max(gq, g1), witness);

        const VerifyReport trio[] = {transfer, gram, conditioned};
        parts[i] = merge(trio, "decay_ingredients");
    });
    return merge(parts, "decay_ingredients");
}

}  // namespace

VerifyReport theorem10_bound_certificate(int p, std::span<const double> a_values, double beta,
                                         const CertificateOptions& opt) {
    if (p != 1 && p != 2) throw std::invalid_argument("theorem10_bound_certificate: p must be 1 or 2");
    if (!(beta > 0.0)) throw std::invalid_argument("theorem10_bound_certificate: beta must be positive");
    if (a_values.size() < 2) throw std::invalid_argument("theorem10_bound_certificate: need at least two a values");
    std::vector<double> as;
    for (double a : a_values) as.push_back(std::abs(a));
    std::sort(as.begin(), as.end());
    if (!(as.front() > 0.0)) throw std::invalid_argument("theorem10_bound_certificate: a values must be nonzero");

    VerifyReport trend = make_report("decay_trend_p" + std::to_string(p), p == 1 ? 1e-9 : 0.0, opt.seed);
    const std::size_t n = as.size();
    if (p == 1) {
        std::vector<double> g(n);
        parallel_for(n, [&](std::size_t i) {
            g[i] = et2_1d_exact(as[i], opt.refinement).value * std::pow(as[i], beta);
        });
        for (std::size_t i = 1; i < n; ++i) {
            trend.observe((g[i - 1] - g[i]) / g[0], [&] {
                return "a=" + format_double(as[i - 1]) + "->" + format_double(as[i]) + " g=" +
                       format_double(g[i - 1]) + "->" + format_double(g[i]);
            });
        }
    } else {
        T2Options t2;
        t2.n_cells = opt.n_cells;
        t2.eps = opt.eps;
        t2.reps = opt.reps;
        t2.seed = opt.seed;
        std::vector<std::vector<double>> s(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double a[] = {as[i]};
            s[i] = t2_samples(a, t2);
            const double w = std::pow(as[i], beta);
            for (double& x : s[i]) x = x * x * w;
        }
        const double g0 = mean_se(s[0]).mean;
        bool noisy = false;
        for (std::size_t i = 0; i < n; ++i) {
            const MCEstimate e = mean_se(s[i]);
            noisy = noisy || !(e.se <= 0.2 * std::abs(e.mean));
        }
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<double> diff(s[i].size());
            for (std::size_t r = 0; r < diff.size(); ++r) diff[r] = s[i][r] - s[i - 1][r];
            const MCEstimate d = mean_se(diff);
            trend.observe((3.0 * d.se - d.mean) / g0, [&] {
                return "a=" + format_double(as[i - 1]) + "->" + format_double(as[i]) + " increase=" +
                       format_double(d.mean) + " se=" + format_double(d.se);
            });
        }
        if (noisy && trend.outcome != Outcome::fail) {
            trend.outcome = Outcome::inconclusive;
            trend.note = "Monte Carlo standard error above 20% of the mean";
        }
    }

    const VerifyReport parts[] = {trend, decay_ingredients(opt)};
    VerifyReport out = merge(parts, "decay_bound_p" + std::to_string(p));
    if (beta >= 1.0) out.note += std::string(out.note.empty() ? "" : "; ") + "beta >= 1 is outside the proven decay range";
    return out;
}

}  // namespace gaussint
