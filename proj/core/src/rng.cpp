#include "plcomp/rng.hpp"

namespace plcomp {

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view role, std::uint64_t index) {
  return splitmix64(root ^ splitmix64(fnv1a64(role) + index));
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  constexpr std::uint64_t kMax = ~std::uint64_t{0};
  const std::uint64_t limit = kMax - (kMax % n + 1) % n;
  std::uint64_t x = engine_();
  while (x > limit) x = engine_();
  return x % n;
}

Rng Rng::child(std::string_view role, std::uint64_t index) const {
  return Rng(derive_seed(seed_, role, index));
}

}  // namespace plcomp
