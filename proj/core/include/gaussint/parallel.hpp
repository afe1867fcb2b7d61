#pragma once

#include <cstddef>
#include <functional>

namespace gaussint {

/// Worker count used by parallel_for; defaults to the hardware concurrency.
void set_thread_count(int threads);
int thread_count();

/// Calls body(i) for every i in [0, n) on up to thread_count() threads. Callers store per-index results and reduce them in index order,
/// which keeps every result independent of the thread count.
/// The first exception thrown by a body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gaussint
