#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace runge {

// Runs fn(i) for i in [0, count) on `threads` workers.  Tasks write to
// pre-assigned slots, so results do not depend on the thread count.
inline void parallel_for(int count, int threads,
                         const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([=, &fn] {
      for (int i = t; i < count; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace runge
