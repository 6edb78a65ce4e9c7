#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plcomp/distributions.hpp"
#include "plcomp/rng.hpp"

namespace plcomp {

/// Element of S5 stored as the images of positions 1..5.
class PermutationS5 {
 public:
  using Mapping = std::array<std::uint8_t, 5>;

  PermutationS5() : map_{1, 2, 3, 4, 5} {}
  /// Throws std::invalid_argument unless `map` is a permutation of 1..5.
  explicit PermutationS5(const Mapping& map);

  static PermutationS5 identity() { return {}; }

  std::uint8_t operator()(std::uint8_t x) const { return map_.at(x - 1); }
  const Mapping& mapping() const { return map_; }

  PermutationS5 inverse() const;

  /// Index in lexicographic order of mapping arrays, 0..119.
  std::size_t lex_index() const;
  static PermutationS5 from_lex_index(std::size_t index);

  /// "1 3 2 4 5"
  std::string to_string() const;

  friend bool operator==(const PermutationS5&, const PermutationS5&) = default;

 private:
  Mapping map_;
};

/// Reading-order composition: g applied first, then h, i.e.
/// (g o h)(x) = h(g(x)).
PermutationS5 s5_compose(const PermutationS5& g, const PermutationS5& h);

/// All 120 elements in lexicographic order.
const std::vector<PermutationS5>& s5_elements();

struct HopMixture {
  std::vector<double> weights;  // weights[i] is the weight of k = i + 1
};

struct StateTrackingRecord {
  std::vector<std::size_t> skills;  // lexicographic indices of the inputs
  std::vector<std::uint8_t> input_tokens;
  std::vector<std::uint8_t> target_tokens;
};

/// Records of k permutations drawn i.i.d. from `dist` (over the 120 lex
/// indices) with the full composition as target. With a hop mixture, each
/// record first draws its own k.
std::vector<StateTrackingRecord> gen_state_tracking(std::size_t k, const SkillDistribution& dist,
                                                    std::size_t n, Rng& rng,
                                                    const std::optional<HopMixture>& hops = {});

}  // namespace plcomp
