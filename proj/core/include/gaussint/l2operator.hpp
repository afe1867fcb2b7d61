#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaussint/grid.hpp"
#include "gaussint/l2vec.hpp"

namespace gaussint {

/// Raised by invert() (and by anything that needs an inverse) when the
/// operator is numerically singular: sigma_min <= 1e-10 * sigma_max.
class SingularOperatorError : public std::runtime_error {
public:
    SingularOperatorError(const std::string& what, double sigma_min, double sigma_max)
        : std::runtime_error(what), sigma_min_(sigma_min), sigma_max_(sigma_max) {}
    double sigma_min() const noexcept { return sigma_min_; }
    double sigma_max() const noexcept { return sigma_max_; }

private:
    double sigma_min_;
    double sigma_max_;
};

inline constexpr double kInvertibilityThreshold = 1e-10;

/// Bounded linear operator on L2([0,1]) represented on a uniform grid.
///
/// On the step-function subspace S the operator acts by `matrix()` on cell
/// coefficients. On the orthogonal complement of S (functions with zero mean
/// on every cell) it acts as multiplication by the cellwise scalar
/// `complement_scale()`. The second part only matters when the operator is
/// applied to functions that are not grid-aligned, e.g. indicators of
/// [s, t] with s, t inside a cell, which the moment quadratures need.
///
/// Values are immutable; copies share storage. Singular values of the matrix
/// are computed lazily (thread-safe) unless the constructor already knows them.
class L2Operator {
public:
    L2Operator(GridSpec grid, Eigen::MatrixXd matrix, std::string label = "matrix");
    L2Operator(GridSpec grid, Eigen::MatrixXd matrix, Eigen::VectorXd complement_scale,
               std::string label);

    /// Same operator with singular values supplied by the caller (no SVD).
    L2Operator with_singular_values(double sigma_min, double sigma_max) const;

    const GridSpec& grid() const noexcept;
    const Eigen::MatrixXd& matrix() const noexcept;
    const Eigen::VectorXd& complement_scale() const noexcept;
    const std::string& label() const noexcept;
    bool is_diagonal() const noexcept;

    /// Extreme singular values of the matrix, i.e. of the restriction to S.
    double sigma_min() const;
    double sigma_max() const;
    double condition_number() const;

    /// Extreme singular values of the whole L2 operator (matrix and complement part).
    double extended_sigma_min() const;
    double extended_sigma_max() const;

    /// sigma_min <= 1e-10 * sigma_max.
    bool is_singular() const;

private:
    friend L2Operator scaled(double factor, const L2Operator& op);
    struct State;
    explicit L2Operator(std::shared_ptr<const State> state);
    std::shared_ptr<const State> state_;
};

L2Vec apply(const L2Operator& op, const L2Vec& f);
L2Operator adjoint(const L2Operator& op);
/// first ∘ second, i.e. f -> first(second(f)).
L2Operator compose(const L2Operator& first, const L2Operator& second);
/// Throws SingularOperatorError when sigma_min <= 1e-10 * sigma_max.
L2Operator invert(const L2Operator& op);
L2Operator scaled(double factor, const L2Operator& op);
/// a*A + b*B.
L2Operator linear_combination(double a, const L2Operator& lhs, double b, const L2Operator& rhs);

/// Volterra kernel k(x, y), used for y < x only.
using KernelFunction = std::function<double(double x, double y)>;

/// Kernel sampled at cell midpoints; entries not listed are zero.
struct KernelTable {
    struct Entry {
        int row;
        int col;
        double value;
    };
    std::vector<Entry> entries;
};

/// Reads "row,col,value" lines. A header line and '#' comments are skipped.
KernelTable read_kernel_csv(const std::string& path);

namespace builtin {

L2Operator identity(const GridSpec& grid);

/// (K f)(x) = integral_0^x k(x, y) f(y) dy, Galerkin-projected onto the grid:
/// K_ij = h k(x_i, x_j) below the diagonal, h/2 k(x_i, x_i) on it.
L2Operator volterra(const GridSpec& grid, const KernelFunction& kernel);
L2Operator volterra(const GridSpec& grid, const KernelTable& table);

/// Multiplication by the step function m. A vanishing cell makes the
/// operator singular; that is reported by is_singular(), not rejected.
L2Operator multiplication(const L2Vec& m);

/// I + eps * K.
L2Operator perturbation(double eps, const L2Operator& k);

/// Orthogonal projection onto the complement of span{v}: Q v = 0, Q^2 = Q.
L2Operator complement_projection(const L2Vec& v);
/// Orthogonal projection onto the complement of span(vs). vs must be independent.
L2Operator complement_projection(std::span<const L2Vec> vs);

}  // namespace builtin
}  // namespace gaussint
