#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace agopnc {

// Global worker count. 1 = reference mode (strictly sequential); >1 = parallel
// mode. Chunk boundaries depend only on (total, thread count), and partial
// results are always merged in chunk order, so outputs are reproducible for a
// fixed mode.
inline std::atomic<int>& thread_count_slot() {
  static std::atomic<int> n{1};
  return n;
}

inline void set_threads(int n) { thread_count_slot() = std::max(1, n); }
inline int threads() { return thread_count_slot().load(); }

struct ChunkRange {
  std::ptrdiff_t begin;
  std::ptrdiff_t end;
};

inline std::vector<ChunkRange> chunk_ranges(std::ptrdiff_t total, int parts) {
  std::vector<ChunkRange> out;
  if (total <= 0) return out;
  const std::ptrdiff_t p =
      std::max<std::ptrdiff_t>(1, std::min<std::ptrdiff_t>(parts, total));
  const std::ptrdiff_t base = total / p;
  const std::ptrdiff_t rem = total % p;
  std::ptrdiff_t at = 0;
  for (std::ptrdiff_t i = 0; i < p; ++i) {
    const std::ptrdiff_t len = base + (i < rem ? 1 : 0);
    out.push_back({at, at + len});
    at += len;
  }
  return out;
}

inline std::size_t chunk_count(std::ptrdiff_t total) {
  return chunk_ranges(total, threads()).size();
}

// Runs fn(chunkIndex, begin, end) over contiguous chunks of [0, total).
// Sequential when threads() == 1.
inline void parallel_chunks(
    std::ptrdiff_t total,
    const std::function<void(std::size_t, std::ptrdiff_t, std::ptrdiff_t)>& fn) {
  const auto chunks = chunk_ranges(total, threads());
  if (chunks.empty()) return;
  if (chunks.size() == 1) {
    fn(0, chunks[0].begin, chunks[0].end);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(chunks.size());
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    pool.emplace_back([&, c] { fn(c, chunks[c].begin, chunks[c].end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace agopnc
