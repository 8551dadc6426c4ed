#pragma once

#include <cstddef>
#include <functional>

namespace rse {

// Thread cap resolved from RS_EXTEND_THREADS (unset or invalid -> hardware).
unsigned thread_cap();

// Runs fn(i) for i in [0, n). Results must be written to per-index slots by the
// caller; the iteration order within a worker is ascending, so serial fallbacks
// and parallel runs see the same work items.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace rse
