#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gaussint/quadrature.hpp"
#include "gaussint/stats.hpp"
#include "gaussint/verify.hpp"

namespace gaussint {

/// {(t1, t2): 0 <= t1 <= 1 - g, t1 + g <= t2 <= 1} with g = |a|^{-alpha}.
struct ConditionTriangle {
    double a_norm = 0.0;
    double alpha = 0.0;

    double gap() const;          // |a|^{-alpha} (infinite for a_norm = 0)
    bool nonempty() const;       // gap < 1
    double area() const;         // (1 - gap)^2 / 2, 0 when empty
};

/// Throws std::invalid_argument when the region is empty.
ConditionTriangle make_condition_triangle(double a_norm, double alpha);

/// E(T_2 | w(1) = a) = int_0^1 (1 - D) (2 pi D (1 - D))^{-1/2} exp(-a^2 D / (2 (1 - D))) dD,
/// evaluated as (2/sqrt(2 pi)) int_0^{pi/2} cos^2 q exp(-a^2 tan^2 q / 2) dq.
/// error = |value(refinement) - value(refinement - 1)| plus the adaptive error.
QuadResult et2_1d_exact(double a, int refinement = 2);

/// Expectation of the kernel estimator for dim 1 (no gap) in the continuum limit.
double et2_1d_regularized(double a, double eps);

/// (1/2 pi) int_L^inf |a|^2 / (y (|a|^2 + y)) e^{-y/2} dy, L = |a|^{2-alpha} / (1 - |a|^{-alpha}),
/// truncated at L + 80; the dropped tail (<= 2 e^{-(L+80)/2}) is added to `error`.
QuadResult et2_planar_exact(double a_norm, double alpha, int refinement = 2);

/// Direct 2D quadrature over (t1, t2) in the condition triangle of
/// exp(-|a|^2 D / (2 (1 - D))) / (2 pi D (1 - D)), D = t2 - t1.
QuadResult et2_planar_direct(double a_norm, double alpha, int refinement = 2);

/// Expectation of the planar kernel estimator in the continuum limit.
double et2_planar_regularized(double a_norm, double alpha, double eps);

struct T2Options {
    int n_cells = 512;
    double eps = 1e-3;
    int reps = 1000;
    std::uint64_t seed = 0;
    std::optional<double> alpha;  // condition-triangle exponent; required for dim 2
};

/// Smallest index gap l - k with (l - k) h >= |a|^{-alpha} (1 without alpha).
int t2_min_gap(double a_norm, const T2Options& opt);

/// Per-replicate T2_hat = h^2 sum_{k<l, l-k >= gap} f_eps(y_l - y_k) for bridges
/// ending at a (dim = a.size()). Replicate r uses noise streams 2r and 2r + 1,
/// so calls with different a share their noise (common random numbers).
std::vector<double> t2_samples(std::span<const double> a, const T2Options& opt);

struct T2Estimate {
    MCEstimate mc;        // of T2_hat^p
    double eps_bias = 0;   // regularized minus exact expectation; NaN for p >= 2
    double grid_bias = 0;  // h * sup of the regularized integrand (Riemann-sum error scale); NaN for p >= 2
    int min_gap = 1;
};

T2Estimate mc_t2_conditional(std::span<const double> a, int p, const T2Options& opt);

enum class LimitClass { finite, zero, divergent, inconclusive };
const char* to_string(LimitClass c);

struct AsymptoticVerdict {
    double alpha = 0.0;
    std::vector<std::pair<double, double>> values_at;  // (a_norm, value)
    LimitClass classified_limit = LimitClass::inconclusive;
    double limit_value = 0.0;  // last value for finite
    double slope = 0.0;        // fit of value against ln a_norm
    double r_squared = 0.0;
};

/// Classifies a sweep: zero (decreasing, last value < 1e-6), finite (relative
/// change over the last decade < 1%, positive), divergent (increasing and
/// linear in ln a_norm with R^2 >= 0.99), otherwise inconclusive.
/// Needs at least 3 points with max/min >= 100.
AsymptoticVerdict classify_values(double alpha, std::vector<std::pair<double, double>> values_at);
AsymptoticVerdict classify_limit(double alpha, std::span<const double> a_norms, int refinement = 2);

struct CertificateOptions {
    int n_cells = 512;
    double eps = 1e-4;
    int reps = 2000;
    std::uint64_t seed = 42;
    int refinement = 2;
    int ingredient_trials = 200;
};

/// Checks that E(T_2^p | w(1) = a) |a|^beta does not increase along the sweep
/// (p = 1 exactly, p = 2 by Monte Carlo with common random numbers within 3 SE),
/// and spot-checks the projection-transfer and Gram ingredients of the bound.
VerifyReport theorem10_bound_certificate(int p, std::span<const double> a_values, double beta,
                                         const CertificateOptions& opt = {});

}  // namespace gaussint
