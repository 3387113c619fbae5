#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace vortexgas::detail {

/// Runs fn(i) for i in [0, n) on at most `threads` workers. Task i always
/// computes the same result regardless of scheduling, so output order (and
/// therefore every downstream reduction) is deterministic.
inline void run_indexed(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace vortexgas::detail
