#pragma once

// Counter-based random streams. Every draw is a pure function of
// (master seed, stream key, counter), so outcomes do not depend on the order
// in which workers or explorations request them.

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

namespace pdim {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Order-dependent combination of two 64-bit words.
constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(a ^ splitmix64(b + 0x632BE59BD9B4E019ull));
}

// Symmetric key for an unordered pair of element hashes.
constexpr std::uint64_t pair_key(std::uint64_t h1, std::uint64_t h2) noexcept {
  if (h1 > h2) std::swap(h1, h2);
  return mix(h1, h2);
}

// Uniform in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix(splitmix64(seed), stream);
}

// Uniform attached to one unordered pair in one trial.
constexpr double pair_uniform(std::uint64_t trial_key, std::uint64_t pair) noexcept {
  return to_unit(mix(trial_key, pair));
}

// Sequential generator over a keyed counter stream; models
// UniformRandomBitGenerator so it can drive <random> distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(stream_key(seed, stream)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return mix(key_, counter_++); }

  constexpr double uniform() noexcept { return to_unit((*this)()); }

  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Smallest lambda at which an edge of weight w with uniform u is open, i.e.
// u < 1 - exp(-lambda * w)  <=>  lambda > activation_threshold(u, w).
inline double activation_threshold(double u, double weight) noexcept {
  if (weight <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-u) / weight;
}

inline bool edge_open(double u, double weight, double lambda) noexcept {
  return activation_threshold(u, weight) < lambda;
}

}  // namespace pdim
