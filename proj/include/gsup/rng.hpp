#pragma once

#include <cstdint>
#include <limits>

namespace gsup {

/// SplitMix64 generator. Satisfies UniformRandomBitGenerator so it plugs into
/// the <random> distributions.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state = 0) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    state_ += kGamma;
    return mix(state_);
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

/// Independent stream for replication `index` under master `seed`. Depends on
/// (seed, index) only, so replications may run in any order or on any worker.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) noexcept {
  const std::uint64_t a = SplitMix64::mix(seed + 0x632be59bd9b4e019ULL);
  const std::uint64_t b = SplitMix64::mix(index ^ 0x85157af5a1e3c2d7ULL);
  return SplitMix64(SplitMix64::mix(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2))));
}

}  // namespace gsup
