#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace wfp {

/// FNV-1a over an arbitrary byte string. Used for stable, platform-independent
/// hashing of stage names, schema documents and config files.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Pure label-derived sub-seed: every pipeline stage (and every forest tree)
/// gets its own stream as a function of (base seed, label) alone.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
  std::uint64_t s = base ^ fnv1a64(label);
  return splitmix64(s);
}

/// Small deterministic generator built on splitmix64. Unlike the standard
/// <random> distributions, every draw here is fully specified, so traces and
/// models are reproducible across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  bool bernoulli(double p) { return next_unit() < p; }

  /// Standard normal via Box-Muller. Consumes exactly two uniforms per call;
  /// no spare is cached, keeping the stream position well defined.
  double normal() {
    double u1 = next_unit();
    double u2 = next_unit();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }

  /// Child stream keyed by a label, decorrelated from the parent sequence.
  Rng derive(std::string_view label) const {
    std::uint64_t s = state_ ^ fnv1a64(label);
    return Rng(splitmix64(s));
  }

 private:
  std::uint64_t state_;
};

}  // namespace wfp
