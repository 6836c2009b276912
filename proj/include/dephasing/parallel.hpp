#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dephasing {

/// Calls body(i) for every i in [0, n) on up to `workers` threads. Work is
/// handed out dynamically; the first exception thrown is rethrown here.
template <class Body> void parallel_for(std::size_t n, unsigned workers, Body &&body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i)
      body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
              failure = std::current_exception();
            next = n;
          }
        }
      });
  }
  if (failure)
    std::rethrow_exception(failure);
}

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

} // namespace dephasing
