#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ecac::detail {

// Below 256 items per worker thread startup dominates for cheap items.
inline std::size_t worker_count(std::size_t work_items,
                                std::size_t min_items_per_worker = 256) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  return std::clamp<std::size_t>(work_items / min_items_per_worker, 1, hw);
}

/// Calls fn(i) for i in [0, n) split into contiguous chunks over worker
/// threads. fn must only write to state owned by index i.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t min_items_per_worker = 256) {
  const std::size_t workers = worker_count(n, min_items_per_worker);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  threads.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    threads.emplace_back([&, begin, end, w] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ecac::detail
