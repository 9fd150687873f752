#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hesn {

/// Runs task(i) for i in [0, n) on at most `workers` threads. Tasks are
/// claimed in index order; results must be written to per-index slots so the
/// outcome does not depend on scheduling. The first exception is rethrown
/// after all threads join.
template <typename Task>
void parallel_for(std::size_t n, int workers, Task&& task) {
  const std::size_t pool = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  if (pool <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        task(i);
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(pool);
  for (std::size_t t = 0; t < pool; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace hesn
