#pragma once

#include <cstddef>
#include <functional>

namespace ndslab {

/// Worker count: NDS_LAB_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Calls body(begin, end) on disjoint contiguous chunks covering [0, n).
/// Chunks are fixed by n and the thread count, so results written per index
/// do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace ndslab
