#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace pir {

// Seedable deterministic randomness source. All protocol randomness flows
// through this class; the mt19937_64 stream and the rejection sampler below
// are fully specified, so a (params, seed) pair reproduces the same queries
// on any platform. std::uniform_int_distribution is implementation-defined
// and deliberately not used.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform value in [0, bound). bound must be nonzero.
  uint64_t uniform(uint64_t bound) {
    const uint64_t limit = bound * (UINT64_MAX / bound);
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  bool coin() { return uniform(2) != 0; }

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[uniform(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pir
