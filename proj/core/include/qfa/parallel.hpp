#pragma once

// Deterministic parallel helpers.  Work is split over disjoint index
// ranges; each item writes to its own slot, and any reduction is performed
// afterwards in a fixed order.  Results are therefore identical for every
// thread count.

#include <complex>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace qfa {

/// Effective thread count: `requested` if positive, else hardware
/// concurrency clamped to [1, 8].
inline int effective_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  return static_cast<int>(hw > 8 ? 8 : hw);
}

/// Run fn(i) for i in [0, n) across `threads` workers on contiguous blocks.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  threads = effective_threads(threads);
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t workers = static_cast<std::size_t>(threads);
  if (workers > n) workers = n;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t lo = n * w / workers;
    std::size_t hi = n * (w + 1) / workers;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

/// Pairwise (tree) summation in a fixed order; deterministic and more
/// accurate than a running sum.
template <typename T>
T pairwise_sum(const std::vector<T>& v) {
  if (v.empty()) return T{};
  std::vector<T> layer = v;
  while (layer.size() > 1) {
    std::size_t half = (layer.size() + 1) / 2;
    std::vector<T> next(half);
    for (std::size_t i = 0; i + 1 < layer.size(); i += 2) next[i / 2] = layer[i] + layer[i + 1];
    if (layer.size() % 2) next[half - 1] = layer[layer.size() - 1];
    layer.swap(next);
  }
  return layer[0];
}

}  // namespace qfa
