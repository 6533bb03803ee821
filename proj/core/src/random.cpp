#include "riskdispatch/random.hpp"

#include <cmath>
#include <numbers>

namespace riskdispatch {

namespace {

constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view domain) {
  return mix64(seed ^ fnv1a(domain));
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view domain, std::uint64_t stream) {
  return mix64(derive_seed(seed, domain) ^ mix64(stream + 1));
}

double NormalStream::uniform_open() noexcept {
  // (k + 0.5) / 2^53 with k in [0, 2^53) never hits 0 or 1.
  const std::uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double NormalStream::next() noexcept {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

}  // namespace riskdispatch
