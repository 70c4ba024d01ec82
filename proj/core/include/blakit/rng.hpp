#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace blakit {

/// SplitMix64 step (Steele/Lea/Flood). Advances `state` and returns the next
/// output. Used only for seeding and for deriving substream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256++ generator (Blackman/Vigna), state seeded through SplitMix64.
///
/// Every stochastic operation in the library draws from this generator, so
/// any result is reproducible bit-for-bit from its seed. Normal deviates use
/// the Box-Muller transform with a cached spare, uniforms use the top 53 bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  /// Independent stream `index` derived from a master seed. Distinct indices
  /// give distinct SplitMix64 seeding chains, so Monte Carlo instances can be
  /// generated in any order (or in parallel) with identical results.
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    Rng r(seed ^ (0xd2b74407b1ce6e93ULL * (index + 1)));
    return r;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
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
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal deviate (Box-Muller).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Fair +1/-1 draw.
  int sign() { return (next_u64() >> 63) ? 1 : -1; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace blakit
