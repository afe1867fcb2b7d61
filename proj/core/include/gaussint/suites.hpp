#pragma once

#include <cstdint>
#include <vector>

#include "gaussint/verify.hpp"

namespace gaussint {

/// Randomized property suites. Trial i draws everything from Rng(seed, i), so
/// a suite is reproducible and independent of the thread count. Reports are
/// merged by deterministic min-reduction.
///
/// Default trial counts match the acceptance criteria.
VerifyReport suite_gram_lower_bound(std::uint64_t seed, int trials = 1000);        // k <= 6, dim <= 16, cond <= 1e3
VerifyReport suite_inverse_gram_quadratic(std::uint64_t seed, int trials = 500);
VerifyReport suite_density_bound(std::uint64_t seed, int trials = 200);            // n <= 4
VerifyReport suite_projection_transfer(std::uint64_t seed, int trials = 1000);
VerifyReport suite_indicator_gram(std::uint64_t seed, int trials = 1000);          // n <= 6, grid 128
VerifyReport suite_delta_product(std::uint64_t seed, int trials = 500);            // n <= 8, 20 transforms each

/// All six suites with their default trial counts, in the order above.
/// `scale` in (0, 1] shrinks every trial count (at least one trial each).
std::vector<VerifyReport> run_lemma_suites(std::uint64_t seed, double scale = 1.0);

}  // namespace gaussint
