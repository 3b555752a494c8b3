#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace curvatura {

// Worker count comes from CURVATURA_WORKERS; everything else about a run is
// in the config so that reports stay reproducible across machines.
inline int worker_count() {
  if (const char* env = std::getenv("CURVATURA_WORKERS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, n). fn must only write to per-index slots; callers
// reduce afterwards in a fixed order, so results do not depend on the number
// of workers.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int workers = worker_count();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  const std::size_t chunks = std::min<std::size_t>(workers, n);
  for (std::size_t c = 0; c < chunks; ++c) {
    pool.emplace_back([&, c] {
      try {
        for (std::size_t i = c; i < n; i += chunks) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace curvatura
