#pragma once

#include <cstddef>
#include <functional>

namespace gei {

/// Worker count: GEI_THREADS if set to a positive integer, else hardware concurrency (>= 1).
std::size_t default_thread_count();

/// Calls body(i) for i in [0, count) on up to `threads` workers (0 = default_thread_count()).
/// Work is claimed dynamically; each index runs exactly once. The first exception thrown
/// by a body is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace gei
