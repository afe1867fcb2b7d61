#include "gaussint/stats.hpp"

#include <cmath>
#include <vector>

namespace gaussint {

double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 16) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

MCEstimate mean_se(std::span<const double> samples) {
    MCEstimate out;
    out.reps = static_cast<long long>(samples.size());
    if (samples.empty()) return out;
    const double n = static_cast<double>(samples.size());
    out.mean = pairwise_sum(samples) / n;
    if (samples.size() < 2) return out;
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double d = samples[i] - out.mean;
        sq[i] = d * d;
    }
    out.se = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
    return out;
}

}  // namespace gaussint
