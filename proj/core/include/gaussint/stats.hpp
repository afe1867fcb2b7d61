#pragma once

#include <span>

namespace gaussint {

/// Pairwise (cascade) summation in index order; bit-stable for a given input.
double pairwise_sum(std::span<const double> x);

struct MCEstimate {
    double mean = 0.0;
    double se = 0.0;  // standard error of the mean
    long long reps = 0;
};

/// Sample mean and its standard error (n - 1 denominator).
MCEstimate mean_se(std::span<const double> samples);

}  // namespace gaussint
