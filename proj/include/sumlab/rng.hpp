#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace sumlab {

// Seed of the named sub-stream (name, counter) under a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view name, std::uint64_t counter = 0);

// Platform-independent generator: mt19937_64 output plus our own bounded draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  Rng(std::uint64_t master, std::string_view name, std::uint64_t counter = 0)
      : eng_(derive_seed(master, name, counter)) {}

  std::uint64_t next() { return eng_(); }
  // Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  // Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace sumlab
