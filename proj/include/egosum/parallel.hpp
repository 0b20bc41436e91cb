#pragma once

#include <cstddef>
#include <functional>

namespace egosum {

/// Worker count from EGOSUM_WORKERS, else the hardware concurrency (>= 1).
unsigned worker_count();

/// Runs body(i) for i in [0, n) over contiguous blocks on worker threads.
/// Bodies must write disjoint outputs; the first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace egosum
