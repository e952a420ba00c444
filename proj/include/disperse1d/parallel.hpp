#pragma once
#include <cstddef>
#include <functional>

namespace disperse1d {

//! Worker count: DISPERSE1D_THREADS if set (>=1), else hardware concurrency.
unsigned worker_count();

//! Runs body(i) for i in [0, n) on up to worker_count() threads. Each index
//! must write only its own output slot; results are then independent of the
//! schedule. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

} // namespace disperse1d
