#pragma once

#include <cstddef>
#include <functional>

namespace halfspace {

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). Work is split into contiguous chunks; results must be
/// written to slot i so the output never depends on scheduling. The first
/// exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

/// Worker count actually used for `threads` (0 = hardware concurrency).
int resolve_threads(int threads);

}  // namespace halfspace
