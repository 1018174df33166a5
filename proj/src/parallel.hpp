#pragma once

#include <cstddef>
#include <functional>

namespace bandtest {

// Thread budget: explicit count, else BANDTEST_THREADS, else hardware (0 = auto).
unsigned resolve_threads(unsigned requested = 0);

// Runs fn(i) for i in [0, count), partitioned into contiguous chunks.
// Results must be written to per-index slots; the partitioning never
// influences values, only scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace bandtest
