#pragma once

#include <cstddef>
#include <functional>

namespace hyperspec {

/// Worker count: HYPERSPEC_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Bodies must
/// only write to per-index state. If any body throws, the exception from the
/// lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hyperspec
