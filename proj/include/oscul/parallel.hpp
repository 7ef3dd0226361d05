#pragma once

#include <cstddef>
#include <functional>

namespace oscul {

/// Worker count: OSCUL_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (0 in the variable also means auto).
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; results
/// must be written to per-index slots so the outcome is thread-count independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace oscul
