#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace holo {

// Runs fn(i) for i in [0, count) across `workers` threads, writing results
// into a pre-sized vector. The reduction over the returned vector is the
// caller's and stays deterministic because results are indexed, not raced.
template <typename R>
std::vector<R> parallel_map(std::size_t count, int workers,
                            const std::function<R(std::size_t)>& fn) {
  std::vector<R> out(count);
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      out[i] = fn(i);
    }
  };
  std::vector<std::thread> pool;
  int n = std::min<int>(workers, static_cast<int>(count));
  pool.reserve(n);
  for (int t = 0; t < n; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace holo
