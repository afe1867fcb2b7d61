#include "gaussint/l2vec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gaussint {

L2Vec::L2Vec(GridSpec grid, Eigen::VectorXd coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.n_cells()) {
        throw std::invalid_argument("L2Vec: " + std::to_string(coeffs_.size()) +
                                    " coefficients for a " + std::to_string(grid_.n_cells()) +
                                    "-cell grid");
    }
}

L2Vec L2Vec::zero(const GridSpec& grid) { return L2Vec(grid, Eigen::VectorXd::Zero(grid.n_cells())); }

L2Vec L2Vec::from_values(const GridSpec& grid, std::span<const double> values) {
    Eigen::VectorXd coeffs(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) coeffs[static_cast<Eigen::Index>(i)] = values[i];
    return L2Vec(grid, std::move(coeffs));
}

L2Vec& L2Vec::operator+=(const L2Vec& other) {
    require_same_grid(grid_, other.grid_, "L2Vec +=");
    coeffs_ += other.coeffs_;
    return *this;
}

L2Vec& L2Vec::operator-=(const L2Vec& other) {
    require_same_grid(grid_, other.grid_, "L2Vec -=");
    coeffs_ -= other.coeffs_;
    return *this;
}

L2Vec& L2Vec::operator*=(double scale) {
    coeffs_ *= scale;
    return *this;
}

L2Vec operator+(L2Vec a, const L2Vec& b) { return a += b; }
L2Vec operator-(L2Vec a, const L2Vec& b) { return a -= b; }
L2Vec operator*(double scale, L2Vec a) { return a *= scale; }

double inner(const L2Vec& f, const L2Vec& g) {
    require_same_grid(f.grid(), g.grid(), "inner");
    return f.grid().h() * f.coeffs().dot(g.coeffs());
}

double norm_squared(const L2Vec& f) { return f.grid().h() * f.coeffs().squaredNorm(); }

double norm(const L2Vec& f) { return std::sqrt(norm_squared(f)); }

L2Vec indicator(const GridSpec& grid, double s, double t) {
    if (!(s >= 0.0 && t <= 1.0 && s <= t)) {
        throw std::invalid_argument("indicator: need 0 <= s <= t <= 1, got s=" + std::to_string(s) +
                                    " t=" + std::to_string(t));
    }
    return cell_indicator(grid, grid.nearest_node(s), grid.nearest_node(t));
}

L2Vec cell_indicator(const GridSpec& grid, int first, int last) {
    if (first < 0 || last > grid.n_cells() || first > last) {
        throw std::invalid_argument("cell_indicator: bad cell range [" + std::to_string(first) + ", " +
                                    std::to_string(last) + ")");
    }
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(grid.n_cells());
    coeffs.segment(first, last - first).setOnes();
    return L2Vec(grid, std::move(coeffs));
}

}  // namespace gaussint
