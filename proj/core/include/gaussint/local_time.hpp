#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gaussint/gauss_sim.hpp"
#include "gaussint/l2operator.hpp"
#include "gaussint/stats.hpp"

namespace gaussint {

/// f_eps(x) = (2 pi eps)^{-1/2} exp(-x^2 / (2 eps)).
double gaussian_kernel(double x, double eps);

/// Smallest admissible bandwidth on a grid: eps >= 4 h^2.
double bandwidth_floor(const GridSpec& grid);

/// Throws std::invalid_argument when eps < 4 h^2.
void require_bandwidth(const GridSpec& grid, double eps);

/// Left Riemann sum h * sum_{k < K} f_eps(x_k - u) with t = t_K grid-aligned.
double local_time_kernel(const GaussPath& path, double u, double t, double eps);

struct Bins {
    double lo = 0.0;     // left edge of bin 0
    double width = 1.0;
    int count = 1;

    double center(int j) const noexcept { return lo + (j + 0.5) * width; }
};

/// Bins of width 4 sigma_hat / sqrt(n) covering [min x, max x]; sigma_hat is the
/// sample standard deviation of the path values (width 1 for a constant path).
Bins default_bins(const GaussPath& path);

struct LocalTimeEstimate {
    std::vector<double> u_grid;   // bin centers (kernel estimates: evaluation points)
    std::vector<double> values;
    double t_horizon = 1.0;
    double bandwidth = 0.0;       // bin width, or eps for kernel estimates
    long long path_count = 1;
};

/// l(u_j) = (1/du) h #{k < n : x_k in bin j}. Samples outside the bins are dropped.
LocalTimeEstimate occupation_density(const GaussPath& path, const Bins& bins);
LocalTimeEstimate occupation_density(const GaussPath& path);

/// h * sum_{k < n} phi(x_k), the left side of the occupation formula at t = 1.
double occupation_integral(const GaussPath& path, const std::function<double(double)>& phi);
/// sum_j phi(u_j) l(u_j) du, the right side.
double occupation_pairing(const LocalTimeEstimate& est, const std::function<double(double)>& phi);

/// Mean over reps paths of local_time_kernel(x, u, t, eps), x = integrator_path(A).
MCEstimate mc_local_time(const L2Operator& a, double u, double t, double eps, int reps, std::uint64_t seed);

/// Mean over reps paths of the binned density at the bin [u - width/2, u + width/2).
MCEstimate mc_occupation_at(const L2Operator& a, double u, double width, int reps, std::uint64_t seed);

/// h^2 sum_{k != l} f_eps(x_k - x_l) over reps paths (left endpoints, diagonal excluded).
MCEstimate mc_selfoverlap(const L2Operator& a, double eps, int reps, std::uint64_t seed);

/// Deterministic single-path version of the estimator.
double selfoverlap_statistic(const GaussPath& path, double eps);

/// Bound on |E mc_selfoverlap - second_moment_exact|: kernel bias from the
/// regularized exact integral plus the excluded-diagonal/grid term.
double selfoverlap_bias_bound(const L2Operator& a, double eps, int refinement);

/// Monte Carlo of E int (l_n - l)^2 du with kernel-smoothed local times of
/// x_n = integrator_path(A_n) and x = integrator_path(A) driven by the same noise:
/// h^2 sum_{k,l} [f_{2eps}(x_n,k - x_n,l) - 2 f_{2eps}(x_n,k - x_l) + f_{2eps}(x_k - x_l)].
MCEstimate mc_convergence_gap(const L2Operator& an, const L2Operator& a, double eps, int reps, std::uint64_t seed);

}  // namespace gaussint
