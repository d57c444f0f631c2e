#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace stoqbell {

// Thread-count resolution: an explicit request wins, otherwise the
// STOQBELL_THREADS environment variable, otherwise hardware concurrency.
// requested == 0 means "auto"; requested < 0 means "not specified".
inline int resolve_threads(int requested = -1) {
  if (requested > 0) return requested;
  if (requested < 0) {
    if (const char* env = std::getenv("STOQBELL_THREADS")) {
      const int v = std::atoi(env);
      if (v > 0) return v;
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, count), partitioned into contiguous chunks.
// Each index is processed exactly once; fn must only write state owned
// by index i, which keeps results independent of the thread count.
inline void parallel_for(long count, int threads, const std::function<void(long)>& fn) {
  if (count <= 0) return;
  const int nt = std::min<long>(std::max(threads, 1), count);
  if (nt == 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const long chunk = (count + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const long lo = t * chunk;
    const long hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] {
      for (long i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace stoqbell
