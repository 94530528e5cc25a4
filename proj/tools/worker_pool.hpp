#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace latentsplit::cli {

/// Runs task(i) for i in [0, n) on up to `jobs` threads. Tasks share nothing;
/// callers store results by index so ordering never depends on scheduling.
/// The first exception escaping a task is rethrown after all workers stop.
inline void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& task) {
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1U, jobs), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          task(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace latentsplit::cli
