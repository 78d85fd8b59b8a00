#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace superrad {

/// Reproducible random source, version 1.
///
/// std::mt19937_64 output is fixed by the standard; the distributions in
/// <random> are not, so uniform, bounded-integer and Gaussian draws are
/// derived here from raw 64-bit words. Changing any of these routines changes
/// every robustness sweep, so bump kRandomStreamVersion when doing so.
inline constexpr int kRandomStreamVersion = 1;

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Standard normal via the Box-Muller transform; caches the second draw.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Seed offsets so that removal and jitter with the same user seed draw from
// unrelated streams.
inline constexpr std::uint64_t kRemovalStream = 0x5eed0001ULL;
inline constexpr std::uint64_t kJitterStream = 0x5eed0002ULL;

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace superrad
