#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace plcomp {

/// Reproducible random stream used by every trial.
///
/// The engine is std::mt19937_64. Streams are never shared between trials;
/// child streams are derived with derive_seed() so adding a trial never
/// perturbs the seeds of existing ones.
class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  engine_type& engine() { return engine_; }

  /// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased by rejection.
  std::uint64_t below(std::uint64_t n);

  double normal(double mean, double stddev) {
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }

  bool coin() { return (engine_() >> 63) != 0; }

  /// Independent child stream for (role, index).
  Rng child(std::string_view role, std::uint64_t index = 0) const;

 private:
  std::uint64_t seed_;
  engine_type engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Stable 64-bit FNV-1a hash; used for role strings and config hashing.
std::uint64_t fnv1a64(std::string_view bytes);

/// Child seed = splitmix(root ^ splitmix(fnv(role) + index)).
std::uint64_t derive_seed(std::uint64_t root, std::string_view role, std::uint64_t index = 0);

}  // namespace plcomp
