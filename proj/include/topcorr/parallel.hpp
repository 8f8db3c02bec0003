#pragma once

#include <cstddef>
#include <functional>

namespace topcorr {

/// Upper bound on worker threads; 0 means hardware concurrency.
void set_thread_limit(unsigned n);
unsigned thread_limit();

/// Calls fn(i) for every i in [0, n) on up to thread_limit() workers.
/// Tasks must write to disjoint outputs; the first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace topcorr
