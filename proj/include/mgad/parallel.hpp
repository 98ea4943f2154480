#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace mgad {

// Static row partition over `threads` workers. Each worker owns a disjoint
// contiguous range, so results are bitwise identical for any thread count as
// long as per-row work is independent.
template <typename Fn>
void parallel_for_rows(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads <= 1 || n < 2 * threads) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = begin + chunk < n ? begin + chunk : n;
    if (begin >= end) break;
    workers.emplace_back([begin, end, &fn] { fn(begin, end); });
  }
  for (auto& w : workers) w.join();
}

}  // namespace mgad
