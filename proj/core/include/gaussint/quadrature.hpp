#pragma once

#include <functional>
#include <span>
#include <vector>

namespace gaussint {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive Gauss-Kronrod (7/15) on [a, b] to relative tolerance `tol`.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                              unsigned max_depth = 18);

/// Adaptive integration over consecutive pieces [p_0, p_1], [p_1, p_2], ...
QuadResult integrate_pieces(const std::function<double(double)>& f, std::span<const double> breaks, double tol,
                            unsigned max_depth = 18);

/// Gauss-Legendre rule on [-1, 1]; order is rounded up to one of 7, 10, 15, 20, 25, 30.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int order);

}  // namespace gaussint
