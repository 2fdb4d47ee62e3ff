#include "dgff/random.hpp"

#include <cmath>
#include <numbers>

namespace dgff {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kSubstreamSalt = 0xD1B54A32D192ED03ull;
}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

GaussianStream::GaussianStream(std::uint64_t seed,
                               std::uint64_t substream) noexcept
    : key_(mix64(mix64(seed) ^ (substream * kGamma + kSubstreamSalt))) {}

std::uint64_t GaussianStream::bits(std::uint64_t index) const noexcept {
  return mix64(key_ + (index + 1) * kGamma);
}

double GaussianStream::uniform(std::uint64_t index) const noexcept {
  return static_cast<double>((bits(index) >> 11) + 1) * 0x1.0p-53;
}

double GaussianStream::normal(std::uint64_t index) const noexcept {
  const std::uint64_t pair = index / 2;
  const double radius = std::sqrt(-2.0 * std::log(uniform(2 * pair)));
  const double angle = 2.0 * std::numbers::pi * uniform(2 * pair + 1);
  return index % 2 == 0 ? radius * std::cos(angle) : radius * std::sin(angle);
}

}  // namespace dgff
