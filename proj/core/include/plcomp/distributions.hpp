#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "plcomp/rng.hpp"

namespace plcomp {

// Skills and ranks are 0-based throughout the library: rank 0 is the most
// frequent ("head") skill. Text formats that talk to people use 1-based ranks.

/// Zipf law over ranks: p_j = j^-alpha / H_{d,alpha}, j = 1..d.
std::vector<double> zipf_weights(std::size_t d, double alpha);

std::vector<double> uniform_weights(std::size_t d);

/// Sizes of m contiguous groups over d ranks; the first d mod m groups get
/// one extra element.
std::vector<std::size_t> contiguous_group_sizes(std::size_t d, std::size_t m);

/// Power law over m contiguous rank bins, uniform inside each bin.
/// binned_zipf_weights(d, d, alpha) == zipf_weights(d, alpha).
std::vector<double> binned_zipf_weights(std::size_t d, std::size_t m, double alpha);

/// Rank-to-skill assignment.
struct Ordering {
  enum class Kind { Identity, Reversed, Random };

  Kind kind = Kind::Identity;
  std::uint64_t seed = 0;  // used by Random only

  static Ordering identity() { return {Kind::Identity, 0}; }
  static Ordering reversed() { return {Kind::Reversed, 0}; }
  static Ordering random(std::uint64_t seed) { return {Kind::Random, seed}; }

  /// Permutation mapping rank position -> skill index.
  std::vector<std::size_t> permutation(std::size_t d) const;

  std::string describe() const;
};

bool is_permutation_of_iota(std::span<const std::size_t> perm);

/// Inverse-CDF sampler over a fixed weight vector (weights need not be
/// normalized). O(log n) per draw.
class DiscreteSampler {
 public:
  DiscreteSampler() = default;
  explicit DiscreteSampler(std::span<const double> weights);

  std::size_t operator()(Rng& rng) const;
  std::size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

enum class DistributionKind { Uniform, Zipf, BinnedZipf };

std::string to_string(DistributionKind kind);

struct DistributionSpec {
  DistributionKind kind = DistributionKind::Zipf;
  std::size_t d = 1;
  double alpha = 1.0;   // Zipf, BinnedZipf
  std::size_t m = 1;    // BinnedZipf
  Ordering ordering = Ordering::identity();
};

/// Immutable skill-frequency distribution with an explicit rank ordering.
class SkillDistribution {
 public:
  static SkillDistribution make(const DistributionSpec& spec);

  std::size_t size() const { return weights_.size(); }
  DistributionKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  std::size_t num_groups() const { return m_; }

  /// Probability of each skill, indexed by skill.
  std::span<const double> weights() const { return weights_; }
  /// Probability at each rank (non-increasing for Zipf kinds).
  std::span<const double> rank_weights() const { return rank_weights_; }
  /// rank -> skill
  std::span<const std::size_t> ordering() const { return rank_to_skill_; }
  std::size_t skill_at_rank(std::size_t rank) const { return rank_to_skill_.at(rank); }
  std::size_t rank_of_skill(std::size_t skill) const { return skill_to_rank_.at(skill); }

  double weight(std::size_t skill) const { return weights_.at(skill); }
  double l2_norm() const { return l2_norm_; }
  double min_weight() const { return min_weight_; }
  double max_weight() const { return max_weight_; }

  std::size_t sample(Rng& rng) const { return rank_to_skill_[sampler_(rng)]; }

 private:
  friend SkillDistribution apply_ordering(std::span<const double>, std::span<const std::size_t>);

  SkillDistribution(std::vector<double> rank_weights, std::vector<std::size_t> rank_to_skill);

  DistributionKind kind_ = DistributionKind::Uniform;
  double alpha_ = 0.0;
  std::size_t m_ = 0;
  std::vector<double> rank_weights_;
  std::vector<std::size_t> rank_to_skill_;
  std::vector<std::size_t> skill_to_rank_;
  std::vector<double> weights_;
  DiscreteSampler sampler_;  // over ranks
  double l2_norm_ = 0.0;
  double min_weight_ = 0.0;
  double max_weight_ = 0.0;
};

/// Skill ordering(j) receives the weight of rank j.
/// Throws std::invalid_argument unless `ordering` is a bijection on [0, d).
SkillDistribution apply_ordering(std::span<const double> rank_weights,
                                 std::span<const std::size_t> ordering);

/// Contiguous rank bins. Bin b holds ranks [start(b), start(b+1)); earlier bins
/// take the extra rank when d is not divisible by num_bins.
class RankBins {
 public:
  RankBins(std::size_t d, std::size_t num_bins = 5);

  std::size_t num_ranks() const { return d_; }
  std::size_t num_bins() const { return starts_.size() - 1; }
  std::size_t start(std::size_t bin) const { return starts_.at(bin); }
  std::size_t end(std::size_t bin) const { return starts_.at(bin + 1); }
  std::size_t size(std::size_t bin) const { return end(bin) - start(bin); }
  std::size_t bin_of_rank(std::size_t rank) const;

 private:
  std::size_t d_;
  std::vector<std::size_t> starts_;
};

}  // namespace plcomp
