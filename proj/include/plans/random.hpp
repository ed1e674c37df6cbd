#pragma once

// Seeded random streams. Every stochastic component owns one RngStream;
// independent streams are derived from a single 64-bit master seed through
// splitmix64 so parallel runs never share state.

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace plans {

/// One step of the splitmix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for stream `stream_id` under `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL));
}

/// FNV-1a hash, used to turn labels into stream ids.
constexpr std::uint64_t label_hash(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) built from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Number of successes in n Bernoulli(p) trials, drawn one at a time so the
  /// result is bit-identical to n calls of bernoulli(p).
  std::uint64_t binomial(std::uint64_t n, double p) {
    std::uint64_t ones = 0;
    for (std::uint64_t k = 0; k < n; ++k) ones += bernoulli(p) ? 1 : 0;
    return ones;
  }

  /// Index drawn with probability proportional to weights (weights sum to 1).
  std::size_t categorical(std::span<const double> weights) {
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      acc += weights[k];
      if (u < acc) return k;
    }
    // Rounding can leave acc slightly below 1; fall back to the last positive weight.
    for (std::size_t k = weights.size(); k-- > 0;) {
      if (weights[k] > 0.0) return k;
    }
    return 0;
  }

  /// Independent child stream.
  RngStream split(std::uint64_t stream_id) const { return RngStream(derive_seed(seed_, stream_id)); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace plans
