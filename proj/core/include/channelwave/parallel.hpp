#pragma once

#include <cstddef>
#include <functional>

namespace channelwave {

/// Worker count: CHANNELWAVE_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; results
/// must be written to index-addressed storage so reductions stay ordered.
/// Calls made from inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace channelwave
