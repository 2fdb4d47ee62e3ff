#pragma once

#include <cstdint>

namespace dgff {

/// SplitMix64 output function.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based standard normal source. Every draw is a pure function of
/// (seed, substream, index), so trials can be generated in any order.
///
/// bits(i) is the (i+1)-th SplitMix64 output from the state
/// key = mix64(mix64(seed) ^ (substream * 0x9E3779B97F4A7C15 + 0xD1B54A32D192ED03)).
/// Uniforms take the top 53 bits and land in (0, 1]; normal(2p) and
/// normal(2p+1) are the cosine and sine halves of one Box-Muller pair built
/// from uniform(2p) and uniform(2p+1).
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t substream) noexcept;

  std::uint64_t bits(std::uint64_t index) const noexcept;
  double uniform(std::uint64_t index) const noexcept;
  double normal(std::uint64_t index) const noexcept;

 private:
  std::uint64_t key_;
};

}  // namespace dgff
