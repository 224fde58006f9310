#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ncsched {

/// Deterministic PRNG used for every seeded draw in the project, so traces
/// reproduce bit-for-bit across platforms and implementations.
///
/// Core generator: splitmix64 (Steele, Lea, Flood 2014). State advances by the
/// golden-ratio increment 0x9E3779B97F4A7C15; output is the finalizer
///   z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
///   z ^= z >> 27; z *= 0x94D049BB133111EB;
///   z ^= z >> 31.
/// Derived draws (documented because std distributions are not portable):
///   - uniform_below(n): rejection below the largest multiple of n, then mod n.
///   - uniform_real(a,b): top 53 bits scaled by 2^-53, affinely mapped to [a,b).
///   - subset(n,m): partial Fisher-Yates over [1..n], first m entries, sorted.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::uniform_below: n must be positive");
    const std::uint64_t limit = ~0ull - (~0ull % n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  double uniform_real(double a, double b) {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
  }

  /// Random m-subset of {1..n}, ascending.
  std::vector<int> subset(int n, int m) {
    if (m < 1 || m > n) throw std::invalid_argument("Rng::subset: require 1 <= m <= n");
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 1);
    for (int i = 0; i < m; ++i) {
      const auto j = i + static_cast<int>(uniform_below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[i], pool[j]);
    }
    std::vector<int> out(pool.begin(), pool.begin() + m);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::uint64_t state_;
};

}  // namespace ncsched
