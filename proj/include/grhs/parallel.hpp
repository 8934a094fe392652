#pragma once

#include <cstddef>
#include <functional>

namespace grhs {

/// Hardware concurrency, capped by GRHS_LAB_THREADS when set to a positive integer.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads.
/// If any call throws, the exception from the smallest failing index is
/// rethrown after all workers stop, so failures are reproducible.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace grhs
