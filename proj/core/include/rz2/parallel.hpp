#pragma once

#include <cstddef>
#include <functional>

namespace rz2 {

/// Worker count for internal parallel loops: RZ2_THREADS if set and
/// positive, otherwise std::thread::hardware_concurrency() (at least 1).
unsigned thread_budget();

/// Calls body(i) for every i in [0, n), spreading contiguous chunks of the
/// range over at most thread_budget() threads. body must only write to
/// per-index state. Rethrows the first exception raised by any chunk.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rz2
