#pragma once

#include <cstddef>

namespace gaussint {

/// Uniform partition of [0, 1] into n_cells cells of width h = 1 / n_cells.
///
/// Every function in the library lives on such a grid: L2Vec coefficients are
/// cell values, path samples sit on the n_cells + 1 nodes.
class GridSpec {
public:
    /// Throws std::invalid_argument when n_cells < 2.
    explicit GridSpec(int n_cells);

    int n_cells() const noexcept { return n_cells_; }
    double h() const noexcept { return h_; }

    /// Node k at time k / n_cells. node(n_cells()) is exactly 1.
    double node(int k) const noexcept { return static_cast<double>(k) / n_cells_; }

    /// Index of the node nearest to t (t is clamped to [0, 1]).
    int nearest_node(double t) const noexcept;

    /// Node index of a time that must already be grid-aligned (within 1e-9 cells).
    /// Throws std::invalid_argument otherwise.
    int aligned_node(double t) const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    int n_cells_;
    double h_;
};

GridSpec make_grid(int n_cells);

/// Throws std::invalid_argument naming `what` when the grids differ.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace gaussint
