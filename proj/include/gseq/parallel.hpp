// Process-wide worker count for data-parallel grid loops.
#pragma once

#include <functional>

namespace gseq {

/// 0 selects the hardware concurrency. Default 1.
void set_thread_count(int threads);
int thread_count();

/// Calls body(lo, hi) on contiguous chunks covering [0, count).
void parallel_for(long count, const std::function<void(long, long)>& body);

}  // namespace gseq
