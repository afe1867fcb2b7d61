#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "gaussint/l2operator.hpp"
#include "gaussint/l2vec.hpp"
#include "gaussint/verify.hpp"

namespace gaussint {

/// G(Ae_1, ..., Ae_k) >= sigma_min(A)^{2k} G(e_1, ..., e_k).
/// Margin (LHS - RHS) / max(LHS, RHS); tolerance 1e-10.
/// Throws SingularOperatorError for a singular A.
VerifyReport check_gram_lower_bound(const L2Operator& a, std::span<const L2Vec> es);

/// (B^{-1}(Ae) u, u) >= sigma_max(A)^{-2} sum (u_i - u_{i-1})^2 / ||e_i - e_{i-1}||^2,
/// e_0 = 0, u_0 = 0, increments pairwise orthogonal. Relative margin; tolerance 1e-8.
/// Throws std::invalid_argument for non-orthogonal or zero increments and
/// std::runtime_error when B(Ae) is numerically singular.
VerifyReport check_inverse_gram_quadratic(const L2Operator& a, std::span<const L2Vec> es,
                                          std::span<const double> u);

/// Gaussian density of (x(s_1), ..., x(s_n)) at u against
/// c1 / sqrt(s_1 (s_2 - s_1) ...) exp(-c2/2 sum (du)^2 / ds),
/// c1 = (2 pi)^{-n/2} sigma_min^{-n}, c2 = sigma_max^{-2}.
/// Margin ln(bound) - ln(density); tolerance 1e-9. Times must be distinct positive grid nodes.
VerifyReport check_density_bound(const L2Operator& a, std::span<const double> times, std::span<const double> us);

/// ln of the density of N(0, cov) at u. Throws std::runtime_error for a singular cov.
double gaussian_log_density(const Eigen::MatrixXd& cov, const Eigen::VectorXd& u);

/// ||P_1 f|| <= ||P_2 g|| (1 + 1e-10) for projections onto span{e_i} and span{Q e_i},
/// given (f, e_i) = (g, Q e_i). Margin is relative to max(||P_1 f||, ||P_2 g||)
/// with an absolute rounding floor 1e-12 (||f|| + ||g||).
VerifyReport check_projection_transfer(const L2Operator& q, std::span<const L2Vec> es, const L2Vec& f,
                                       const L2Vec& g);

/// f in span{e_i} with (f, e_i) = (g, Q e_i).
L2Vec synthesize_transfer_pair(const L2Operator& q, std::span<const L2Vec> es, const L2Vec& g);

/// Gamma(1_D1, ..., 1_Dn) >= prod_k |D_k \ (D_1 u ... u D_{k-1})|, absolute tolerance 1e-12.
/// Each delta is a 0/1 step function (a union of grid cells).
VerifyReport indicator_gram_bound(std::span<const L2Vec> deltas);

/// Lebesgue measure of D_k minus the earlier sets, for each k.
std::vector<double> residual_measures(std::span<const L2Vec> deltas);

struct SingularityIntegral {
    double value = 0.0;     // int_0^1 dt / ||1_[0,t] - y||^{1+alpha}
    double majorant = 0.0;  // b + 4 b^{1-q} / (q - 1), q = 2/(1+alpha), b = 4^{(1+alpha)/2}
    VerifyReport report;
};

/// ||1_[0,t] - y||^2 is linear in t inside each cell, so each cell integral is
/// exact. Throws std::invalid_argument unless 0 <= alpha < 1.
SingularityIntegral check_singularity_integrability(const L2Vec& y, double alpha);

/// Fourier-Wiener transform of prod_j delta_0((r_j, xi)) at h.
double fourier_wiener_product(std::span<const L2Vec> rs, const L2Vec& h);
/// Transform of int prod_k delta_0((f_k, xi) - u) du at h via the dual vector f.
double fourier_wiener_integrated(std::span<const L2Vec> fs, const L2Vec& h);
/// Same transform from the Gram inverse directly (before the dual-vector rewrite).
double fourier_wiener_integrated_gram(std::span<const L2Vec> fs, const L2Vec& h);

/// For independent f_1..f_n and r_j = f_{j+1} - f_j:
///  (i)   G(r) = ||f||^2 G(f_1..f_n), f the dual vector, relative tolerance 1e-8;
///  (ii)  span{r_j} = {v in span(f): (v, f) = 0}, projector difference <= 1e-9;
///  (iii) the two transforms agree at n_transforms random h, relative tolerance 1e-8.
/// Throws std::invalid_argument for dependent fs.
VerifyReport check_delta_product_identity(std::span<const L2Vec> fs, std::uint64_t seed, int n_transforms = 20);

/// Compact text form of a vector family for witnesses.
std::string describe(std::span<const L2Vec> vs);

}  // namespace gaussint
