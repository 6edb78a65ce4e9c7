#include "plcomp/s5.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace plcomp {

PermutationS5::PermutationS5(const Mapping& map) : map_(map) {
  std::array<bool, 5> seen{};
  for (auto v : map_) {
    if (v < 1 || v > 5 || seen[v - 1]) throw std::invalid_argument("PermutationS5: not a permutation");
    seen[v - 1] = true;
  }
}

PermutationS5 PermutationS5::inverse() const {
  Mapping inv{};
  for (std::uint8_t i = 0; i < 5; ++i) inv[map_[i] - 1] = static_cast<std::uint8_t>(i + 1);
  return PermutationS5(inv);
}

std::size_t PermutationS5::lex_index() const {
  // Lehmer code: count of smaller unused values at each position.
  static constexpr std::array<std::size_t, 5> kFact{24, 6, 2, 1, 1};
  std::size_t idx = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    std::size_t smaller = 0;
    for (std::size_t j = i + 1; j < 5; ++j)
      if (map_[j] < map_[i]) ++smaller;
    idx += smaller * kFact[i];
  }
  return idx;
}

PermutationS5 PermutationS5::from_lex_index(std::size_t index) {
  if (index >= 120) throw std::out_of_range("PermutationS5::from_lex_index");
  return s5_elements()[index];
}

std::string PermutationS5::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < 5; ++i) {
    if (i) s += ' ';
    s += static_cast<char>('0' + map_[i]);
  }
  return s;
}

PermutationS5 s5_compose(const PermutationS5& g, const PermutationS5& h) {
  PermutationS5::Mapping m{};
  for (std::uint8_t x = 1; x <= 5; ++x) m[x - 1] = h(g(x));
  return PermutationS5(m);
}

const std::vector<PermutationS5>& s5_elements() {
  static const std::vector<PermutationS5> all = [] {
    std::vector<PermutationS5> out;
    PermutationS5::Mapping m{1, 2, 3, 4, 5};
    do {
      out.emplace_back(m);
    } while (std::next_permutation(m.begin(), m.end()));
    return out;
  }();
  return all;
}

std::vector<StateTrackingRecord> gen_state_tracking(std::size_t k, const SkillDistribution& dist,
                                                    std::size_t n, Rng& rng,
                                                    const std::optional<HopMixture>& hops) {
  if (dist.size() != 120) throw std::invalid_argument("gen_state_tracking: need 120 skills");
  if (!hops && k == 0) throw std::invalid_argument("gen_state_tracking: k must be >= 1");
  std::optional<DiscreteSampler> hop_sampler;
  if (hops) hop_sampler.emplace(hops->weights);
  const auto& elems = s5_elements();
  std::vector<StateTrackingRecord> out;
  out.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t hops_here = hop_sampler ? (*hop_sampler)(rng) + 1 : k;
    StateTrackingRecord rec;
    PermutationS5 acc;
    for (std::size_t t = 0; t < hops_here; ++t) {
      const std::size_t s = dist.sample(rng);
      rec.skills.push_back(s);
      const auto& g = elems[s];
      rec.input_tokens.insert(rec.input_tokens.end(), g.mapping().begin(), g.mapping().end());
      acc = s5_compose(acc, g);
    }
    rec.target_tokens.assign(acc.mapping().begin(), acc.mapping().end());
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace plcomp
