#pragma once

#include <cmath>
#include <cstdint>

namespace pregrasp {

// Deterministic PRNG used everywhere in the project. All distributions are
// implemented here (not via <random> distributions) so that streams are
// reproducible independent of the standard library version.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix(seed ^ 0x9e3779b97f4a7c15ull)) {
    // Warm up so trivially related seeds decorrelate.
    next_u64();
    next_u64();
  }

  // Stream-splitting rule: the rng for instance `index` under a root seed is
  // Rng(derive_stream(root, index)). Documented contract for parallel envs.
  static std::uint64_t derive_stream(std::uint64_t root_seed, std::uint64_t index) {
    return splitmix(root_seed + 0x632be59bd9b4e019ull * (index + 1));
  }

  std::uint64_t next_u64() {
    // xorshift64* — small, fast, deterministic.
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dull;
  }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal via Box-Muller (two engine draws per call, no cached
  // spare, so the stream layout is position-independent).
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t state_;
};

}  // namespace pregrasp
