#pragma once

#include <cstddef>
#include <functional>

namespace evolab {

// Runs fn(0) .. fn(n-1) on up to num_threads workers. Each index is handled
// exactly once; callers write results into a per-index slot, so the output
// is byte-identical no matter how many workers run (the spawn is just a
// static interleaving of indices). num_threads <= 1 runs inline. Exceptions
// from fn are collected and the first one rethrown after all workers join.
void parallel_for(std::size_t n, int num_threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace evolab
