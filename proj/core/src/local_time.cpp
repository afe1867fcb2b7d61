#include "gaussint/local_time.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

#include "gaussint/moments.hpp"
#include "gaussint/pair_kernel.hpp"
#include "gaussint/parallel.hpp"

namespace gaussint {
namespace {

std::span<const double> left_samples(const GaussPath& path, int dim = 0) {
    const Eigen::VectorXd& v = path.values.at(static_cast<std::size_t>(dim));
    return {v.data(), static_cast<std::size_t>(path.grid.n_cells())};
}

template <class F>
MCEstimate replicate(int reps, F&& per_rep) {
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    std::vector<double> samples(static_cast<std::size_t>(reps));
    parallel_for(samples.size(), [&](std::size_t r) { samples[r] = per_rep(static_cast<std::uint64_t>(r)); });
    return mean_se(samples);
}

}  // namespace

double gaussian_kernel(double x, double eps) {
    return std::exp(-x * x / (2.0 * eps)) / std::sqrt(2.0 * std::numbers::pi * eps);
}

double bandwidth_floor(const GridSpec& grid) { return 4.0 * grid.h() * grid.h(); }

void require_bandwidth(const GridSpec& grid, double eps) {
    const double floor = bandwidth_floor(grid);
    if (!(eps >= floor * (1.0 - 1e-12))) {
        throw std::invalid_argument("bandwidth eps=" + std::to_string(eps) + " is below the grid floor 4h^2=" +
                                    std::to_string(floor) + " for " + std::to_string(grid.n_cells()) + " cells");
    }
}

double local_time_kernel(const GaussPath& path, double u, double t, double eps) {
    require_bandwidth(path.grid, eps);
    const int k_end = path.grid.aligned_node(t);
    const Eigen::VectorXd& x = path.values.at(0);
    std::vector<double> terms(static_cast<std::size_t>(k_end));
    for (int k = 0; k < k_end; ++k) terms[static_cast<std::size_t>(k)] = gaussian_kernel(x[k] - u, eps);
    return path.grid.h() * pairwise_sum(terms);
}

Bins default_bins(const GaussPath& path) {
    const auto xs = left_samples(path);
    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    const double sigma = std::sqrt(var / std::max(n - 1.0, 1.0));
    Bins b;
    b.lo = *mn;
    b.width = sigma > 0.0 ? 4.0 * sigma / std::sqrt(n) : 1.0;
    b.count = static_cast<int>(std::floor((*mx - *mn) / b.width)) + 1;
    return b;
}

LocalTimeEstimate occupation_density(const GaussPath& path, const Bins& bins) {
    if (!(bins.width > 0.0) || bins.count < 1) throw std::invalid_argument("occupation_density: bad bins");
    std::vector<long long> counts(static_cast<std::size_t>(bins.count), 0);
    for (double x : left_samples(path)) {
        const double j = std::floor((x - bins.lo) / bins.width);
        if (j >= 0.0 && j < bins.count) ++counts[static_cast<std::size_t>(j)];
    }
    LocalTimeEstimate est;
    est.bandwidth = bins.width;
    est.t_horizon = 1.0;
    const double h = path.grid.h();
    for (int j = 0; j < bins.count; ++j) {
        est.u_grid.push_back(bins.center(j));
        est.values.push_back(h * static_cast<double>(counts[static_cast<std::size_t>(j)]) / bins.width);
    }
    return est;
}

LocalTimeEstimate occupation_density(const GaussPath& path) { return occupation_density(path, default_bins(path)); }

double occupation_integral(const GaussPath& path, const std::function<double(double)>& phi) {
    const auto xs = left_samples(path);
    std::vector<double> terms(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) terms[k] = phi(xs[k]);
    return path.grid.h() * pairwise_sum(terms);
}

double occupation_pairing(const LocalTimeEstimate& est, const std::function<double(double)>& phi) {
    std::vector<double> terms(est.values.size());
    for (std::size_t j = 0; j < terms.size(); ++j) terms[j] = phi(est.u_grid[j]) * est.values[j] * est.bandwidth;
    return pairwise_sum(terms);
}

MCEstimate mc_local_time(const L2Operator& a, double u, double t, double eps, int reps, std::uint64_t seed) {
    require_bandwidth(a.grid(), eps);
    return replicate(reps, [&](std::uint64_t r) {
        return local_time_kernel(integrator_path(a, sample_noise(a.grid(), seed, r)), u, t, eps);
    });
}

MCEstimate mc_occupation_at(const L2Operator& a, double u, double width, int reps, std::uint64_t seed) {
    const Bins bins{u - 0.5 * width, width, 1};
    return replicate(reps, [&](std::uint64_t r) {
        return occupation_density(integrator_path(a, sample_noise(a.grid(), seed, r)), bins).values[0];
    });
}

double selfoverlap_statistic(const GaussPath& path, double eps) {
    require_bandwidth(path.grid, eps);
    const double h = path.grid.h();
    const double pairs = pair_gauss_sum_1d(left_samples(path), eps, 1);
    return 2.0 * h * h * pairs / std::sqrt(2.0 * std::numbers::pi * eps);
}

MCEstimate mc_selfoverlap(const L2Operator& a, double eps, int reps, std::uint64_t seed) {
    require_bandwidth(a.grid(), eps);
    return replicate(reps, [&](std::uint64_t r) {
        return selfoverlap_statistic(integrator_path(a, sample_noise(a.grid(), seed, r)), eps);
    });
}

double selfoverlap_bias_bound(const L2Operator& a, double eps, int refinement) {
    const double exact = second_moment_exact(a, refinement).value;
    const double regularized = second_moment_regularized(a, eps, refinement).value;
    return std::abs(regularized - exact) + a.grid().h() / std::sqrt(2.0 * std::numbers::pi * eps);
}

MCEstimate mc_convergence_gap(const L2Operator& an, const L2Operator& a, double eps, int reps, std::uint64_t seed) {
    require_same_grid(an.grid(), a.grid(), "mc_convergence_gap");
    require_bandwidth(a.grid(), eps);
    const double h = a.grid().h();
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * 2.0 * eps);
    return replicate(reps, [&](std::uint64_t r) {
        const NoiseSample noise = sample_noise(a.grid(), seed, r);
        const GaussPath xn = integrator_path(an, noise);
        const GaussPath x = integrator_path(a, noise);
        const auto sn = left_samples(xn);
        const auto s = left_samples(x);
        const double total = cross_gauss_sum_1d(sn, sn, 2.0 * eps) - 2.0 * cross_gauss_sum_1d(sn, s, 2.0 * eps) +
                             cross_gauss_sum_1d(s, s, 2.0 * eps);
        return h * h * norm * total;
    });
}

}  // namespace gaussint
