#pragma once

#include <cstddef>
#include <functional>

namespace potlab {

/// Worker count: hardware concurrency, capped by the POTLAB_THREADS
/// environment variable when it is set to a positive integer.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on a static partition of worker_count()
/// threads. Each index is visited exactly once; results written to
/// per-index slots are therefore independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace potlab
