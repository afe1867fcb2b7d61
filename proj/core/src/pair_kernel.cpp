// Compiled with -ffast-math: no NaN/Inf checks in here.
#include "gaussint/pair_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace gaussint {
namespace {

// Sorts indices by key, ties broken by index, so the order is deterministic.
std::vector<int> sorted_order(const std::vector<double>& key) {
    std::vector<int> order(key.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return key[static_cast<std::size_t>(a)] < key[static_cast<std::size_t>(b)] ||
               (key[static_cast<std::size_t>(a)] == key[static_cast<std::size_t>(b)] && a < b);
    });
    return order;
}

}  // namespace

double pair_cutoff(double eps) { return std::sqrt(80.0 * eps); }

double pair_gauss_sum_1d(std::span<const double> x, double eps, int min_gap) {
    const std::size_t n = x.size();
    std::vector<double> key(x.begin(), x.end());
    const std::vector<int> order = sorted_order(key);
    std::vector<double> v(n);
    std::vector<int> idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        idx[i] = order[i];
        v[i] = key[static_cast<std::size_t>(order[i])];
    }
    const double cut = pair_cutoff(eps);
    const double c = -0.5 / eps;
    double total = 0.0;
    std::size_t end = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (end < i + 1) end = i + 1;
        while (end < n && v[end] - v[i] <= cut) ++end;
        const double vi = v[i];
        const int ii = idx[i];
        double acc = 0.0;
#pragma omp simd reduction(+ : acc)
        for (std::size_t j = i + 1; j < end; ++j) {
            const double d = v[j] - vi;
            const int gap = idx[j] > ii ? idx[j] - ii : ii - idx[j];
            acc += gap >= min_gap ? std::exp(c * d * d) : 0.0;
        }
        total += acc;
    }
    return total;
}

double pair_gauss_sum_2d(std::span<const double> x, std::span<const double> y, double eps, int min_gap,
                         double ux, double uy) {
    const std::size_t n = x.size();
    std::vector<double> key(n);
    for (std::size_t i = 0; i < n; ++i) key[i] = ux * x[i] + uy * y[i];
    const std::vector<int> order = sorted_order(key);
    std::vector<double> p(n), px(n), py(n);
    std::vector<int> idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto o = static_cast<std::size_t>(order[i]);
        idx[i] = order[i];
        p[i] = key[o];
        px[i] = x[o];
        py[i] = y[o];
    }
    const double cut = pair_cutoff(eps);
    const double c = -0.5 / eps;
    double total = 0.0;
    std::size_t end = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (end < i + 1) end = i + 1;
        while (end < n && p[end] - p[i] <= cut) ++end;
        const double xi = px[i];
        const double yi = py[i];
        const int ii = idx[i];
        double acc = 0.0;
#pragma omp simd reduction(+ : acc)
        for (std::size_t j = i + 1; j < end; ++j) {
            const double dx = px[j] - xi;
            const double dy = py[j] - yi;
            const int gap = idx[j] > ii ? idx[j] - ii : ii - idx[j];
            acc += gap >= min_gap ? std::exp(c * (dx * dx + dy * dy)) : 0.0;
        }
        total += acc;
    }
    return total;
}

double cross_gauss_sum_1d(std::span<const double> x, std::span<const double> y, double eps) {
    std::vector<double> ys(y.begin(), y.end());
    std::sort(ys.begin(), ys.end());
    const double cut = pair_cutoff(eps);
    const double c = -0.5 / eps;
    double total = 0.0;
    for (const double xk : x) {
        const auto lo = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), xk - cut) - ys.begin());
        const auto hi = static_cast<std::size_t>(std::upper_bound(ys.begin(), ys.end(), xk + cut) - ys.begin());
        double acc = 0.0;
#pragma omp simd reduction(+ : acc)
        for (std::size_t j = lo; j < hi; ++j) {
            const double d = ys[j] - xk;
            acc += std::exp(c * d * d);
        }
        total += acc;
    }
    return total;
}

}  // namespace gaussint
