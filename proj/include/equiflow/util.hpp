#pragma once

// Deterministic RNG and the thread pool helper. Runs must be bit-identical
// for a given seed, so all randomness flows through Rng and the parallel
// partition is by contiguous node ranges (no work stealing).

#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace equiflow {

// splitmix64; double conversion keeps the top 53 bits
struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed) : state(seed + 0x9e3779b97f4a7c15ULL) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

inline int worker_count() {
  if (const char* env = std::getenv("EQUIFLOW_THREADS")) {
    int k = std::atoi(env);
    if (k >= 1) return k;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end) over a partition of [0, n). Serial when one worker.
template <typename F>
void parallel_for(int64_t n, const F& fn, int workers = worker_count()) {
  if (workers <= 1 || n < 4096) {
    fn(int64_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    int64_t b = w * chunk;
    int64_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace equiflow
