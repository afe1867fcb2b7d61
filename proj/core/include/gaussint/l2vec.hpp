#pragma once

#include <Eigen/Dense>

#include <span>

#include "gaussint/grid.hpp"

namespace gaussint {

/// Step function on a GridSpec: coefficient i is the value on cell i.
/// Carries the L2([0,1]) inner product (f, g) = h * sum f_i g_i.
class L2Vec {
public:
    /// Throws std::invalid_argument when coeffs.size() != grid.n_cells().
    L2Vec(GridSpec grid, Eigen::VectorXd coeffs);

    static L2Vec zero(const GridSpec& grid);
    static L2Vec from_values(const GridSpec& grid, std::span<const double> values);

    const GridSpec& grid() const noexcept { return grid_; }
    const Eigen::VectorXd& coeffs() const noexcept { return coeffs_; }
    int size() const noexcept { return grid_.n_cells(); }
    double operator[](int i) const { return coeffs_[i]; }

    L2Vec& operator+=(const L2Vec& other);
    L2Vec& operator-=(const L2Vec& other);
    L2Vec& operator*=(double scale);

private:
    GridSpec grid_;
    Eigen::VectorXd coeffs_;
};

L2Vec operator+(L2Vec a, const L2Vec& b);
L2Vec operator-(L2Vec a, const L2Vec& b);
L2Vec operator*(double scale, L2Vec a);

double inner(const L2Vec& f, const L2Vec& g);
double norm_squared(const L2Vec& f);
double norm(const L2Vec& f);

/// Indicator of [s, t]. Endpoints snap to the nearest grid node, so the
/// result is 1 on whole cells and norm_squared equals the snapped length.
/// Throws std::invalid_argument unless 0 <= s <= t <= 1.
L2Vec indicator(const GridSpec& grid, double s, double t);

/// Indicator of the cell range [first, last).
L2Vec cell_indicator(const GridSpec& grid, int first, int last);

}  // namespace gaussint
