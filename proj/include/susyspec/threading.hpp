#pragma once

#include <cstddef>
#include <functional>

namespace susyspec {

// Worker count: SUSYSPEC_THREADS when set, hardware concurrency otherwise.
int worker_count();

// Runs fn(i) for i in [0, n) on the worker pool.  Results must be written
// to index-addressed slots so assembly order stays deterministic.  The
// first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace susyspec
