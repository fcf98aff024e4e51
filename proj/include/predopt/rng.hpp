#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace predopt {

// Seeded random source. The engine is std::mt19937_64, but the integer and
// real draws are implemented here: the std::uniform_* distributions are
// implementation-defined, which would break byte-identical artifacts across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer on the closed interval [lo, hi], unbiased via rejection.
  long long uniform_int(long long lo, long long hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
    if (span == 0) return lo + static_cast<long long>(engine_());  // full range
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return lo + static_cast<long long>(r % span);
  }

  // Uniform real in [0, 1) with 53 bits of precision.
  double canonical() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * canonical();
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(
          uniform_int(0, static_cast<long long>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct values from {0, ..., n-1}, returned sorted.
  std::vector<int> sample_without_replacement(int n, int k) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < k; ++i) {
      const auto j = static_cast<std::size_t>(uniform_int(i, n - 1));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace predopt
