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

struct PlCheck {
  std::vector<double> ratios;  // per record; NaN where skipped
  double min_ratio = 0.0;      // over evaluated records (+inf if none)
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  bool passed = true;  // every evaluated ratio >= 1 - 1e-9
};

/// ||grad L||^2 >= 2 k p_min A^{2k-2} L along logged records; records with
/// L <= 1e-14 are skipped.
PlCheck check_pl_inequality(std::span<const StepRecord> records, double p_min, std::size_t k);

struct StationaryReport {
  double grad_norm_origin = 0.0;
  double grad_norm_plus = 0.0;
  double grad_norm_minus = 0.0;
  double min_probe_grad_norm = 0.0;
  std::size_t num_probes = 0;
  bool passed = false;  // fixed points <= 1e-12 and every probe > 0; -w* only for even k
};

/// Gradient norms at {0, +w*, -w*} and at random probes kept at least 1e-3
/// (inf-norm) away from all three.
StationaryReport check_stationary_points(const HiddenSkillVector& wstar, std::span<const double> p,
                                         std::size_t k, std::size_t num_probes, Rng& rng);

struct InitConcentration {
  std::size_t trials = 0;
  std::vector<double> a_ratio_quantiles;  // |A(0)| / (r ||p||): q = 0.01, 0.25, 0.5, 0.75, 0.99
  std::vector<double> b_ratio_quantiles;  // |B(0) - r^2| / (r^2 ||p||), same q
  double median_abs_a = 0.0;
  double a_bracket_fraction = 0.0;  // fraction with ratio in [a_lo, a_hi]
  double b_bracket_fraction = 0.0;  // fraction with ratio <= b_hi
  bool passed = false;              // both fractions >= 0.99
};

struct InitBrackets {
  double a_lo = 1e-3;
  double a_hi = 5.0;
  double b_hi = 10.0;
};

/// Statistics of A(0), B(0) under w(0) ~ N(0, r^2 I), with w* = 1 (the
/// reparametrized frame; A(0) has the same law for any sign vector).
InitConcentration check_init_concentration(std::size_t d, double r, std::span<const double> p,
                                           std::size_t num_trials, Rng& rng,
                                           const InitBrackets& brackets = {});

struct GradientNoiseStats {
  std::size_t batch_size = 0;
  std::size_t num_batches = 0;
  double mean_noise_norm = 0.0;
  double population_grad_norm = 0.0;
  double ratio = 0.0;               // mean_noise_norm / population_grad_norm
  double violation_fraction = 0.0;  // batches with ||xi|| > ||grad L|| / 8
};

GradientNoiseStats estimate_gradient_noise(std::span<const double> w, const HiddenSkillVector& wstar,
                                           const SkillDistribution& dist, std::size_t k,
                                           std::size_t batch_size, std::size_t num_batches,
                                           Rng& rng);

struct CsqPackingConfig {
  std::size_t d = 400;
  double epsilon = 0.31;
  std::size_t num_vectors = 100;
  std::size_t k = 4;
  std::uint64_t seed = 0;
};

struct CsqPackingReport {
  double max_overlap = 0.0;      // max_{i != j} |w_i.w_j| / d
  double max_correlation = 0.0;  // max_overlap^k
  double packing_budget = 0.0;   // e^{eps^2 d / 4}, packing size up to a constant
  bool within_budget = true;
  bool passed = false;  // max_overlap <= epsilon
};

CsqPackingReport csq_packing(const CsqPackingConfig& config);

/// Hoeffding + union bound radius: max overlap of q random sign vectors is
/// below sqrt(2 ln(2 q^2 / delta) / d) with probability >= 1 - delta.
double hoeffding_overlap_bound(std::size_t d, std::size_t q, double delta);

struct SeparationConfig {
  std::size_t d = 50;
  std::size_t k = 4;
  double alpha = 1.5;
  double r = 0.1;
  std::size_t batch_size = 8;
  std::vector<std::uint64_t> sample_budgets;  // report points (samples, not steps)
  std::size_t num_seeds = 5;
  std::uint64_t root_seed = 0;
  double success_error = 0.1;
  std::uint64_t max_samples = 50'000'000;  // cap on the Zipf arm's search for N*
  std::uint64_t check_every_steps = 100;
};

struct SeparationArmPoint {
  std::uint64_t budget = 0;
  double median_recovery_error = 0.0;
  double median_population_loss = 0.0;
};

struct SeparationResult {
  std::vector<SeparationArmPoint> zipf_curve;
  std::vector<SeparationArmPoint> uniform_curve;
  std::vector<std::optional<std::uint64_t>> zipf_budget_to_success;  // per seed
  std::optional<std::uint64_t> median_success_budget;               // N*
  std::vector<double> uniform_loss_at_success_budget;               // per seed
  double median_uniform_loss_at_success_budget = 0.0;
  std::vector<std::uint64_t> seeds;  // root seed of each paired trial
};

/// Paired minibatch-SGD runs that differ only in the skill distribution
/// (Zipf vs uniform). Both arms share w*, w(0) and the uniform variates that
/// drive index sampling; step sizes follow the default 1/(20 k^2 ||p||) policy
/// for each arm's own p.
SeparationResult separation_experiment(const SeparationConfig& config);

}  // namespace plcomp
