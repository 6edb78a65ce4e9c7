#include "plcomp/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace plcomp {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Sum j^-alpha for j = n down to 1 so the small terms accumulate first.
double generalized_harmonic(std::size_t n, double alpha) {
  double h = 0.0;
  for (std::size_t j = n; j >= 1; --j) h += std::pow(static_cast<double>(j), -alpha);
  return h;
}

}  // namespace

std::vector<double> zipf_weights(std::size_t d, double alpha) {
  require(d >= 1, "zipf_weights: d must be >= 1");
  require(alpha > 0.0 && std::isfinite(alpha), "zipf_weights: alpha must be > 0");
  const double h = generalized_harmonic(d, alpha);
  std::vector<double> p(d);
  for (std::size_t j = 0; j < d; ++j) p[j] = std::pow(static_cast<double>(j + 1), -alpha) / h;
  return p;
}

std::vector<double> uniform_weights(std::size_t d) {
  require(d >= 1, "uniform_weights: d must be >= 1");
  return std::vector<double>(d, 1.0 / static_cast<double>(d));
}

std::vector<std::size_t> contiguous_group_sizes(std::size_t d, std::size_t m) {
  require(m >= 1 && m <= d, "group count must satisfy 1 <= m <= d");
  std::vector<std::size_t> sizes(m, d / m);
  for (std::size_t i = 0; i < d % m; ++i) ++sizes[i];
  return sizes;
}

std::vector<double> binned_zipf_weights(std::size_t d, std::size_t m, double alpha) {
  require(d >= 1, "binned_zipf_weights: d must be >= 1");
  require(m >= 1 && m <= d, "binned_zipf_weights: need 1 <= m <= d");
  if (m == d) return zipf_weights(d, alpha);
  const auto totals = zipf_weights(m, alpha);
  const auto sizes = contiguous_group_sizes(d, m);
  std::vector<double> p;
  p.reserve(d);
  for (std::size_t b = 0; b < m; ++b) {
    const double each = totals[b] / static_cast<double>(sizes[b]);
    p.insert(p.end(), sizes[b], each);
  }
  return p;
}

std::vector<std::size_t> Ordering::permutation(std::size_t d) const {
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  switch (kind) {
    case Kind::Identity:
      break;
    case Kind::Reversed:
      std::reverse(perm.begin(), perm.end());
      break;
    case Kind::Random: {
      // Fisher-Yates with our own index draws so the result does not depend
      // on the standard library's shuffle implementation.
      Rng rng(derive_seed(seed, "ordering"));
      for (std::size_t i = d; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
      break;
    }
  }
  return perm;
}

std::string Ordering::describe() const {
  switch (kind) {
    case Kind::Identity:
      return "identity";
    case Kind::Reversed:
      return "reversed";
    case Kind::Random:
      return "random:" + std::to_string(seed);
  }
  return "?";
}

bool is_permutation_of_iota(std::span<const std::size_t> perm) {
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t v : perm) {
    if (v >= perm.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

DiscreteSampler::DiscreteSampler(std::span<const double> weights) {
  require(!weights.empty(), "DiscreteSampler: empty weight vector");
  cumulative_.resize(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    require(weights[i] >= 0.0 && std::isfinite(weights[i]), "DiscreteSampler: bad weight");
    acc += weights[i];
    cumulative_[i] = acc;
  }
  require(acc > 0.0, "DiscreteSampler: weights sum to zero");
  for (double& c : cumulative_) c /= acc;
  cumulative_.back() = 1.0;
}

std::size_t DiscreteSampler::operator()(Rng& rng) const {
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  // u < 1 == cumulative_.back(), so `it` is always dereferenceable; zero-weight
  // entries are skipped because upper_bound moves past equal cumulatives.
  return static_cast<std::size_t>(it - cumulative_.begin());
}

std::string to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::Uniform:
      return "uniform";
    case DistributionKind::Zipf:
      return "zipf";
    case DistributionKind::BinnedZipf:
      return "binned_zipf";
  }
  return "?";
}

SkillDistribution::SkillDistribution(std::vector<double> rank_weights,
                                     std::vector<std::size_t> rank_to_skill)
    : rank_weights_(std::move(rank_weights)), rank_to_skill_(std::move(rank_to_skill)) {
  const std::size_t d = rank_weights_.size();
  skill_to_rank_.resize(d);
  weights_.resize(d);
  for (std::size_t r = 0; r < d; ++r) {
    skill_to_rank_[rank_to_skill_[r]] = r;
    weights_[rank_to_skill_[r]] = rank_weights_[r];
  }
  sampler_ = DiscreteSampler(rank_weights_);
  double sq = 0.0;
  for (double w : rank_weights_) sq += w * w;
  l2_norm_ = std::sqrt(sq);
  const auto [lo, hi] = std::minmax_element(rank_weights_.begin(), rank_weights_.end());
  min_weight_ = *lo;
  max_weight_ = *hi;
}

SkillDistribution apply_ordering(std::span<const double> rank_weights,
                                 std::span<const std::size_t> ordering) {
  require(!rank_weights.empty(), "apply_ordering: empty weights");
  require(ordering.size() == rank_weights.size(), "apply_ordering: ordering length mismatch");
  require(is_permutation_of_iota(ordering), "apply_ordering: ordering is not a bijection");
  double total = 0.0;
  for (double w : rank_weights) {
    require(w > 0.0 && std::isfinite(w), "apply_ordering: weights must be strictly positive");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-9, "apply_ordering: weights must sum to 1");
  return SkillDistribution({rank_weights.begin(), rank_weights.end()},
                           {ordering.begin(), ordering.end()});
}

SkillDistribution SkillDistribution::make(const DistributionSpec& spec) {
  std::vector<double> w;
  switch (spec.kind) {
    case DistributionKind::Uniform:
      w = uniform_weights(spec.d);
      break;
    case DistributionKind::Zipf:
      w = zipf_weights(spec.d, spec.alpha);
      break;
    case DistributionKind::BinnedZipf:
      w = binned_zipf_weights(spec.d, spec.m, spec.alpha);
      break;
  }
  const auto perm = spec.ordering.permutation(spec.d);
  SkillDistribution dist = apply_ordering(w, perm);
  dist.kind_ = spec.kind;
  dist.alpha_ = spec.kind == DistributionKind::Uniform ? 0.0 : spec.alpha;
  dist.m_ = spec.kind == DistributionKind::BinnedZipf ? spec.m : spec.d;
  return dist;
}

RankBins::RankBins(std::size_t d, std::size_t num_bins) : d_(d) {
  require(num_bins >= 1 && num_bins <= d, "RankBins: need 1 <= num_bins <= d");
  const auto sizes = contiguous_group_sizes(d, num_bins);
  starts_.assign(1, 0);
  for (std::size_t s : sizes) starts_.push_back(starts_.back() + s);
}

std::size_t RankBins::bin_of_rank(std::size_t rank) const {
  if (rank >= d_) throw std::out_of_range("RankBins::bin_of_rank: rank out of range");
  const auto it = std::upper_bound(starts_.begin(), starts_.end(), rank);
  return static_cast<std::size_t>(it - starts_.begin()) - 1;
}

}  // namespace plcomp
