#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "plcomp/composition.hpp"
#include "plcomp/distributions.hpp"
#include "plcomp/population.hpp"
#include "plcomp/rng.hpp"

namespace plcomp {

/// Rank bins resolved against a distribution's ordering.
struct SkillBins {
  RankBins bins;
  std::vector<std::size_t> bin_of_skill;
  std::vector<std::vector<std::size_t>> skills;  // per bin, in rank order
};

SkillBins assign_bins(const SkillDistribution& dist, std::size_t num_bins = 5);

/// Population loss when all k indices are drawn from bin `bin` with the
/// in-bin weights renormalized: 0.5 (B_b^k - 2 A_b^k + 1).
double binwise_population_loss(std::span<const double> w, std::span<const double> wstar,
                               const SkillDistribution& dist, std::size_t k,
                               const RankBins& bins, std::size_t bin);

/// Expected per-sample gradient norm over samples with exactly one position
/// (uniform over the k positions) from `tail_bin` and the other k-1 positions
/// from the union of `context_bins`, each with renormalized weights.
/// Monte-Carlo estimate over `num_samples` draws.
double tail_gradient_norm(std::span<const double> w, const HiddenSkillVector& wstar,
                          const SkillDistribution& dist, std::size_t k, const SkillBins& bins,
                          std::size_t tail_bin, std::span<const std::size_t> context_bins,
                          std::size_t num_samples, Rng& rng);

struct StageThresholds {
  double total_drop = 0.05;      // stage-1 exit: loss <= (1 - total_drop) L0
  double head_bin_fraction = 0.5;  // stage-2 entry: bin-0 loss <= fraction * L0
};

struct StageReport {
  std::optional<std::uint64_t> stage1_exit_step;
  std::optional<std::uint64_t> stage2_entry_step;
  /// First logged step where bin b's loss is <= half its initial value.
  std::vector<std::optional<std::uint64_t>> bin_halving_step;
};

/// Stage boundaries from a trajectory whose records carry bin losses.
/// A trajectory that starts at the minimizer (L0 <= 1e-14) reports both stages
/// at its first step.
StageReport detect_stages(std::span<const StepRecord> records,
                          const StageThresholds& thresholds = {});

/// First logged step at which `value(record)` <= fraction * value(first record).
template <class Fn>
std::optional<std::uint64_t> first_fraction_step(std::span<const StepRecord> records, double fraction,
                                                 Fn value) {
  if (records.empty()) return std::nullopt;
  const double v0 = value(records.front());
  for (const auto& r : records)
    if (value(r) <= fraction * v0) return r.step;
  return std::nullopt;
}

struct PcaResult {
  std::vector<double> dir1;
  std::vector<double> dir2;
  double explained1 = 0.0;
  double explained2 = 0.0;
  bool dir2_degenerate = false;
};

/// Top-2 principal directions of the centered diff vectors, by power
/// iteration with deflation (tolerance 1e-10, at most 10^4 iterations) from a
/// seeded start vector. A degenerate second direction is replaced by a seeded
/// unit vector orthogonal to dir1 with zero explained variance.
PcaResult pca_top2(std::span<const std::vector<double>> diffs, std::uint64_t seed = 0);

/// Consecutive checkpoint differences theta_t - theta_{t-1}.
std::vector<std::vector<double>> checkpoint_diffs(std::span<const Checkpoint> checkpoints);

struct LandscapeSlice {
  std::vector<double> center;
  std::vector<double> dir1;
  std::vector<double> dir2;
  double extent1 = 0.0;  // grid spans [-extent1, extent1] along dir1
  double extent2 = 0.0;
  std::size_t resolution = 0;  // points per axis (odd, so the center is a node)
  std::vector<double> grid;    // row-major [i1 * resolution + i2]

  double coord(double extent, std::size_t i) const;
  double at(std::size_t i1, std::size_t i2) const { return grid[i1 * resolution + i2]; }
};

/// Population loss on center + a dir1 + b dir2. `resolution` is rounded up
/// to the next odd number.
LandscapeSlice landscape_slice(std::span<const double> center, std::span<const double> dir1,
                               std::span<const double> dir2, double extent1, double extent2,
                               std::size_t resolution, std::span<const double> wstar,
                               std::span<const double> p, std::size_t k);

/// Projection of points onto the slice plane: (dir1.(x - c), dir2.(x - c)).
std::vector<std::pair<double, double>> project_onto_slice(const LandscapeSlice& slice,
                                                          std::span<const Checkpoint> points);

/// Largest in-plane slope ||(g.dir1, g.dir2)|| of the population loss over
/// grid nodes within `radius` of the slice center.
double max_slope_within(const LandscapeSlice& slice, double radius, std::span<const double> wstar,
                        std::span<const double> p, std::size_t k);

}  // namespace plcomp
