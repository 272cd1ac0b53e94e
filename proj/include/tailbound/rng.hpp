#pragma once

#include <cstdint>
#include <limits>

namespace tailbound {

/// SplitMix64 generator. Small state, good equidistribution, and trivially
/// splittable: independent streams are derived from (seed, index) pairs, so a
/// replicate's draws do not depend on which thread runs it.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Rng(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform double strictly inside (0, 1): 53 random bits, offset by half a
  /// unit, so inverse-transform sampling never sees 0 or 1.
  constexpr double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Generator for stream `index` of a family rooted at `seed`.
  static constexpr Rng stream(std::uint64_t seed, std::uint64_t index) noexcept {
    return Rng(mix(mix(seed) ^ (index * kGamma + 0x632be59bd9b4e019ULL)));
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

}  // namespace tailbound
