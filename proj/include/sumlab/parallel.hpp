#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace sumlab {

// Runs fn(i) for i in [0, count) on up to `threads` workers, claiming indices in order.
template <class Fn>
void parallel_for(std::uint64_t count, unsigned threads, Fn&& fn) {
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t i = next++; i < count; i = next++) fn(i);
  };
  const unsigned n =
      std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(count, 64))));
  if (n == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace sumlab
