#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

#include "gaussint/l2vec.hpp"

namespace gaussint {

/// Pivots below this fraction of the largest diagonal entry count as zero.
inline constexpr double kDependenceTolerance = 1e-12;
/// Determinants below this value are reported as exactly 0.
inline constexpr double kDeterminantFloor = 1e-300;

/// Result of a diagonally pivoted Cholesky factorization of a PSD matrix.
struct PivotedCholesky {
    double det = 0.0;          // product of accepted pivots, 0 if rank deficient
    int rank = 0;
    std::vector<int> order;    // indices in pivot order; the first `rank` are independent
    bool full_rank = false;
};

PivotedCholesky pivoted_cholesky(const Eigen::MatrixXd& gram);

/// Gram matrix and determinant of a family of vectors.
struct GramSystem {
    std::vector<L2Vec> vectors;
    Eigen::MatrixXd gram;
    double det = 0.0;
    bool chol_ok = false;      // full rank at tolerance
    int rank = 0;
    std::vector<int> independent;  // max-pivot independent subset, ascending
};

GramSystem make_gram_system(std::span<const L2Vec> vs);
Eigen::MatrixXd gram_matrix(std::span<const L2Vec> vs);

/// det G(v_1, ..., v_k) >= 0; 0 for dependent families. The empty family has determinant 1.
double gram_det(std::span<const L2Vec> vs);
double gram_det(const Eigen::MatrixXd& gram);

/// Orthogonal projection of h onto span(vs). Dependent members are dropped first.
L2Vec project(std::span<const L2Vec> vs, const L2Vec& h);

/// Orthonormal basis of span(vs) (modified Gram-Schmidt, applied twice).
std::vector<L2Vec> orthonormal_basis(std::span<const L2Vec> vs);

/// Local-nondeterminism ratio of a vector-valued path t -> g(t):
/// G(g(t_1), g(t_2) - g(t_1), ..., g(t_m) - g(t_{m-1})) / prod of squared norms
/// = V_2 ... V_m, in [0, 1]. Throws std::invalid_argument on a zero increment.
double ln_ratio(const std::function<L2Vec(double)>& path, std::span<const double> times);

/// Same product computed from conditional variances of the Gaussian vector
/// ((g(t_i), xi))_i, for cross-checking.
double ln_ratio_conditional(const std::function<L2Vec(double)>& path, std::span<const double> times);

/// The f in span(fs) with (f, f_k) = 1 for every k. Throws std::invalid_argument if fs is dependent.
L2Vec dual_vector(std::span<const L2Vec> fs);

/// Coefficients lambda with sum lambda_i e_i having inner products `targets` with the e_i.
/// Throws std::invalid_argument if es is dependent.
Eigen::VectorXd solve_gram(std::span<const L2Vec> es, const Eigen::VectorXd& targets);

}  // namespace gaussint
