#pragma once
// Seeded randomness with portable output. The engine is std::mt19937_64
// (bit-exact across standard libraries); every distribution is built here
// instead of on std:: distributions, whose output is implementation
// defined. All pipeline randomness flows through this header so seeded
// runs are byte-identical everywhere.

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace ties {

// splitmix64 finalizer. Used to derive independent seed streams.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_str(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Deterministic seed derivation: chain the base seed with any number of
// salts. Different salt sequences give independent streams.
inline std::uint64_t derive_seed(std::uint64_t base) { return mix64(base); }

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt, Rest... rest) {
  return derive_seed(mix64(base ^ mix64(salt)), rest...);
}

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t base, std::string_view salt, Rest... rest) {
  return derive_seed(mix64(base ^ hash_str(salt)), rest...);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, n). Lemire's method with rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal via Box-Muller. No spare caching: each call consumes
  // exactly two uniforms, which keeps replay positions predictable.
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    // Avoid log(0).
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Exponential with the given rate (rate > 0).
  double exponential(double rate) {
    double u = uniform01();
    return -std::log1p(-u) / rate;
  }

  // Poisson count. Knuth's product method; large means are split using
  // the additivity of independent Poisson draws.
  std::int64_t poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    std::int64_t total = 0;
    while (lambda > 30.0) {
      double half = lambda / 2.0;
      total += poisson_knuth(half);
      lambda -= half;
    }
    return total + poisson_knuth(lambda);
  }

  // Fisher-Yates using the unbiased index draw above.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

 private:
  std::int64_t poisson_knuth(double lambda) {
    double limit = std::exp(-lambda);
    double prod = uniform01();
    std::int64_t k = 0;
    while (prod > limit) {
      ++k;
      prod *= uniform01();
    }
    return k;
  }

  std::mt19937_64 engine_;
};

}  // namespace ties
