#include "gaussint/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gaussint {

GridSpec::GridSpec(int n_cells) : n_cells_(n_cells), h_(0.0) {
    if (n_cells < 2) {
        throw std::invalid_argument("grid needs at least 2 cells, got " + std::to_string(n_cells));
    }
    h_ = 1.0 / static_cast<double>(n_cells);
}

int GridSpec::nearest_node(double t) const noexcept {
    const double clamped = std::clamp(t, 0.0, 1.0);
    return static_cast<int>(std::lround(clamped * n_cells_));
}

int GridSpec::aligned_node(double t) const {
    const double scaled = t * n_cells_;
    const double k = std::round(scaled);
    if (t < 0.0 || t > 1.0 || std::abs(scaled - k) > 1e-9) {
        throw std::invalid_argument("time " + std::to_string(t) + " is not a node of a " +
                                    std::to_string(n_cells_) + "-cell grid");
    }
    return static_cast<int>(k);
}

GridSpec make_grid(int n_cells) { return GridSpec(n_cells); }

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (!(a == b)) {
        throw std::invalid_argument(std::string(what) + ": grid mismatch (" +
                                    std::to_string(a.n_cells()) + " vs " +
                                    std::to_string(b.n_cells()) + " cells)");
    }
}

}  // namespace gaussint
