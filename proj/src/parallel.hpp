#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace barma::detail {

// Worker cap: BETARMA_THREADS when set, else hardware concurrency.
inline int worker_count(int n_tasks) {
  int cap = 0;
  if (const char* env = std::getenv("BETARMA_THREADS")) {
    cap = std::atoi(env);
  }
  if (cap <= 0) cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap <= 0) cap = 1;
  return std::min(cap, n_tasks);
}

// Run fn(0..n_tasks-1), each index exactly once. Tasks must be independent;
// any determinism requirement is on the caller (per-index substreams, slot
// writes). Exceptions from tasks are rethrown on the calling thread.
inline void parallel_for(int n_tasks, const std::function<void(int)>& fn) {
  const int workers = worker_count(n_tasks);
  if (workers <= 1) {
    for (int i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (;;) {
          const int i = next.fetch_add(1);
          if (i >= n_tasks) break;
          fn(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace barma::detail
