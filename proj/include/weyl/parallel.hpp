#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace weyl {

/// Process-wide cap on worker threads; 0 restores the default (hardware concurrency).
void set_max_threads(unsigned threads);
unsigned max_threads() noexcept;

/// Runs body(i) for i in [0, count) over static contiguous chunks. The chunking
/// depends only on `count`, never on the thread count, so per-chunk work is identical
/// regardless of schedule. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Evaluates fn(i) for every i in parallel and returns results in index order;
/// callers reduce sequentially, so reductions are schedule independent.
template <class T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(count);
  parallel_for(count, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace weyl
