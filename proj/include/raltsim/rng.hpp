#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace raltsim {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Collapses (seed, substream ids) into one 64-bit stream seed. Trials keyed
/// by (altitude index, trial index) get independent, scheduling-order-free
/// random streams from the same scenario seed.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a = 0,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s ^= a * 0x9E3779B97F4A7C15ULL + 0x165667B19E3779F9ULL;
  h ^= splitmix64(s);
  s ^= b * 0xC2B2AE3D27D4EB4FULL + 0x27D4EB2F165667C5ULL;
  h ^= splitmix64(s);
  s ^= c * 0x2545F4914F6CDD1DULL + 0x9E3779B97F4A7C15ULL;
  h ^= splitmix64(s);
  return h;
}

/// xoshiro256** with Box-Muller on top. Bit-exact on every platform, which
/// is what keeps the repeat-run determinism contract honest; <random>
/// distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform phase in [0, 2*pi).
  double phase() { return uniform01() * 6.283185307179586476925286766559; }

  /// Standard normal via Box-Muller; the spare value is cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    // Avoid log(0).
    while (u1 <= 0.0) u1 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Circularly-symmetric complex Gaussian sample with total variance
  /// `variance` (variance/2 per quadrature).
  std::complex<double> complex_gaussian(double variance) {
    const double s = std::sqrt(variance * 0.5);
    const double re = gaussian();
    const double im = gaussian();
    return {s * re, s * im};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4] = {};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace raltsim
