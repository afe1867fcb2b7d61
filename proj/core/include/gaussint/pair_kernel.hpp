#pragma once

#include <span>

namespace gaussint {

/// Window beyond which Gaussian kernel terms are dropped: |d| > sqrt(80 eps),
/// i.e. exp(-d^2 / (2 eps)) < e^-40.
double pair_cutoff(double eps);

/// Sum over unordered index pairs {k, l} with |k - l| >= min_gap of
/// exp(-(x_k - x_l)^2 / (2 eps)). No normalization.
double pair_gauss_sum_1d(std::span<const double> x, double eps, int min_gap);

/// Planar version with d^2 = (x_k - x_l)^2 + (y_k - y_l)^2. (ux, uy) is a unit
/// direction along which the points are sorted; pick the direction of largest
/// spread (e.g. the bridge endpoint) to keep the window small.
double pair_gauss_sum_2d(std::span<const double> x, std::span<const double> y, double eps, int min_gap,
                         double ux, double uy);

/// Sum over all (k, l) of exp(-(x_k - y_l)^2 / (2 eps)).
double cross_gauss_sum_1d(std::span<const double> x, std::span<const double> y, double eps);

}  // namespace gaussint
