#ifndef NLCPS_RNG_HPP
#define NLCPS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace nlcps {

// Deterministic random numbers. The engine (std::mt19937_64) is specified
// bit-exactly by the standard; the distribution transforms below are written
// out by hand because the std:: distributions are implementation-defined and
// would break byte-identical reproducibility across toolchains.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Sub-seed derivation: every random stream in the pipeline is seeded as
/// derive_seed(master, purpose_tag), so one top-level seed drives the whole
/// experiment and independent streams never share state.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
  std::uint64_t state = master ^ fnv1a64(tag);
  splitmix64(state);
  return splitmix64(state);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform on {0, ..., n-1}. Plain modulo; the bias is ~n/2^64 and
  /// irrelevant at the n <= a-few-hundred this project uses.
  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

  /// Box-Muller without caching: two engine draws per normal, so the draw
  /// count per call is fixed and replay stays aligned.
  double normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log() finite
    const double u2 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * mag * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace nlcps

#endif  // NLCPS_RNG_HPP
