#pragma once

#include <cstddef>
#include <functional>

namespace qcc {

/// Caps the number of worker threads used by all parallel stages.
/// 0 restores the hardware default. Thread-compatible with running work.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs fn(i) for every i in [0, n). Each index is claimed by exactly one
/// worker; order is unspecified. Callers keep results deterministic by
/// giving every index a disjoint output slot and combining slots in index
/// order afterwards. Work partitioning never depends on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace qcc
