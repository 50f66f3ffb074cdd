#pragma once

#include <cstdint>

namespace monex {

// Counter-based deterministic generator: value(i) depends only on (seed, i),
// so parallel shards can draw disjoint counter ranges and reproduce exactly.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t start = 0) : seed_(seed), counter_(start) {}

  static uint64_t at(uint64_t seed, uint64_t counter) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t next_u64() { return at(seed_, counter_++); }

  // Uniform in [0, n), unbiased via rejection.
  uint64_t next_below(uint64_t n) {
    uint64_t threshold = (0ULL - n) % n;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Derive an independent stream for shard i (stable across thread counts).
  static uint64_t sub_seed(uint64_t seed, uint64_t shard) {
    return at(seed ^ 0xd1b54a32d192ed03ULL, shard);
  }

  uint64_t counter() const { return counter_; }

 private:
  uint64_t seed_;
  uint64_t counter_;
};

}  // namespace monex
