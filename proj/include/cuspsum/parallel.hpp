#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cuspsum {

// Worker count used by every parallel loop in the library. 0 selects the
// hardware concurrency.
void set_thread_count(unsigned count);
unsigned thread_count();

// Splits [0, count) into contiguous chunks and calls fn(begin, end) on each,
// one chunk per worker. Exceptions from workers are rethrown on the caller.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn, std::size_t min_chunk = 1) {
  if (count == 0) return;
  std::size_t workers = std::min<std::size_t>(thread_count(), count / std::max<std::size_t>(min_chunk, 1));
  if (workers <= 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace cuspsum
