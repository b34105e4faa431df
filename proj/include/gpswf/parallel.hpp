#pragma once

#include <cstddef>
#include <functional>

namespace gpswf {

// Worker count: hardware concurrency, capped by GPSWF_THREADS when set.
unsigned worker_count();

// Calls body(i) for i in [0, n) on up to worker_count() threads. Indices are
// handed out in contiguous blocks; body must not touch shared mutable state.
// The first exception thrown by any worker is rethrown after all join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gpswf
