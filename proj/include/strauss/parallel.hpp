#pragma once

#include <functional>

namespace strauss {

/// Worker count: STRAUSS_THREADS if set and > 0, otherwise the hardware
/// concurrency. STRAUSS_THREADS=0 also means auto.
int thread_count();

/// Apply fn to every index in [begin, end) across thread_count() workers.
/// Indices are partitioned into contiguous static chunks, so any output
/// written per-index is independent of the worker count.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

} // namespace strauss
