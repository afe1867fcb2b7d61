#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gaussint/l2operator.hpp"

namespace gaussint {

struct MomentQuadrature {
    std::string integrand_id;
    int refinement = 0;
    double value = 0.0;
    double error_estimate = 0.0;  // |value(refinement) - value(refinement - 1)|
};

/// E int l(u)^2 du = (2/sqrt(2 pi)) int_{s<t} ds dt / ||A 1_[s,t]||.
/// Throws SingularOperatorError unless A (including its complement scale) is invertible.
MomentQuadrature second_moment_exact(const L2Operator& a, int refinement);

/// E int l_1(u) l_2(u) du = (1/sqrt(2 pi)) int_[0,1]^2 ds dt / ||A1 1_[0,t] - A2 1_[0,s]||.
MomentQuadrature cross_moment_exact(const L2Operator& a1, const L2Operator& a2, int refinement);

/// Expectation of the kernel estimator h^2 sum f_eps(x_k - x_l) in the continuum
/// limit: (2/sqrt(2 pi)) int_{s<t} ds dt / sqrt(||A 1_[s,t]||^2 + eps).
MomentQuadrature second_moment_regularized(const L2Operator& a, double eps, int refinement);

struct ConvergencePoint {
    int n = 0;
    double value = 0.0;           // E int (l_n - l)^2 du
    double error_estimate = 0.0;
    double inverse_norm = 0.0;    // ||A_n^{-1}|| on the grid (extended operator)
};

/// M(A_n, A_n) - 2 C(A_n, A) + M(A, A) for each n. Points are computed in
/// parallel; the result order follows `ns`.
std::vector<ConvergencePoint> lt_convergence_experiment(const std::function<L2Operator(int)>& sequence,
                                                        const L2Operator& limit, std::span<const int> ns,
                                                        int refinement);

}  // namespace gaussint
