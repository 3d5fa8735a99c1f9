#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace msfc {

// Deterministic, platform-independent RNG used everywhere seeds matter.
// std::mt19937_64 would do, but distributions in <random> are not
// bit-specified across standard libraries; this keeps report files
// byte-identical regardless of toolchain.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double next_double(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t next_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(next_double() * static_cast<double>(n));
  }

  /// Standard normal via Box-Muller (polar form avoided for determinism).
  double next_gaussian() {
    // u in (0,1] so log() is finite
    double u = 1.0 - next_double();
    double v = next_double();
    return std::sqrt(-2.0 * std::log(u)) *
           std::cos(6.283185307179586476925286766559 * v);
  }

 private:
  std::uint64_t state_;
};

/// FNV-1a hash of a label, for mixing stable task identifiers into seeds.
constexpr std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Derive an independent child seed from a base seed and a task tag, so that
/// concurrent and serial execution draw identical streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  SplitMix64 mix(base ^ (tag * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL));
  return mix.next_u64();
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
  return derive_seed(base, hash_label(label));
}

}  // namespace msfc
