#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace riskdispatch {

// Seeds for independent consumers of one user seed. Scheduling samples and
// validation trials draw from different domains so validation is always
// out-of-sample.
namespace seed_domain {
inline constexpr std::string_view scheduling = "scenario-sampling";
inline constexpr std::string_view validation = "risk-validation";
inline constexpr std::string_view synthetic_trace = "synthetic-trace";
}  // namespace seed_domain

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Domain-separated child seed: mix64(seed ^ fnv1a(domain)) and, when a
/// stream index is given, mixed once more with it.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view domain);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view domain, std::uint64_t stream);

/// Standard normal stream: std::mt19937_64 for bits, 53-bit uniforms on (0,1),
/// classic Box-Muller pairs. Both pieces are fully specified, so draws are
/// identical across compilers and standard libraries (unlike
/// std::normal_distribution).
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double uniform_open() noexcept;
  double next() noexcept;

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace riskdispatch
