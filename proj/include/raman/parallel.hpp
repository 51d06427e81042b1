#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace raman {

// 0 means one worker per logical core.
inline unsigned resolve_jobs(unsigned jobs) {
  return jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
}

// Runs body(first, last) over [0, count) split into contiguous chunks, one per
// worker. The first exception thrown by any chunk is rethrown after all join.
template <typename Body>
void parallel_chunks(long count, unsigned jobs, Body&& body) {
  const long workers_wanted = std::min<long>(resolve_jobs(jobs), std::max(1L, count));
  if (workers_wanted <= 1) {
    body(0L, count);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    const long chunk = (count + workers_wanted - 1) / workers_wanted;
    for (long first = 0; first < count; first += chunk) {
      const long last = std::min(count, first + chunk);
      workers.emplace_back([&, first, last] {
        try {
          body(first, last);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace raman
