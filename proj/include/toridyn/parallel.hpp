#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace toridyn {

inline int default_thread_count() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

/// Runs fn(i) for i in [0, n), split into contiguous chunks across threads.
/// Callers write results into preallocated slots, so the outcome does not
/// depend on the thread count.
inline void parallel_for(size_t n, int threads,
                         const std::function<void(size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  size_t workers = std::min<size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    size_t lo = n * w / workers;
    size_t hi = n * (w + 1) / workers;
    pool.emplace_back([lo, hi, &fn] {
      for (size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace toridyn
