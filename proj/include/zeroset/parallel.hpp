#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace zeroset {

inline int default_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs fn(block_index) for block_index in [0, blocks).
///
/// Blocks are claimed from a shared counter, so the assignment of blocks to
/// worker threads is arbitrary, but callers index per-block state (RNG
/// streams, output slots) by block_index; any reduction done in fixed block
/// order is therefore independent of the thread count.
inline void parallel_for_blocks(std::int64_t blocks, int threads,
                                const std::function<void(std::int64_t)>& fn) {
  if (threads <= 1 || blocks <= 1) {
    for (std::int64_t b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::int64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      fn(b);
    }
  };
  std::vector<std::thread> pool;
  const int n = static_cast<int>(std::min<std::int64_t>(threads, blocks));
  pool.reserve(n);
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace zeroset
