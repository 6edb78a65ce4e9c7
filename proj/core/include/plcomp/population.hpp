#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "plcomp/distributions.hpp"

namespace plcomp {

/// Sufficient statistics of the population dynamics.
struct PopulationStats {
  double A = 0.0;  // sum_i p_i w_i w*_i
  double B = 0.0;  // sum_i p_i w_i^2
  // Offsets from the nearer minimizer s w* (s = sign A), with e = w - s w*:
  // u = s sum_i p_i e_i w*_i and v = sum_i p_i e_i^2, so A = s (1 + u) and
  // B = 1 + 2u + v. NaN when unknown; the loss then falls back to A and B.
  double sign = 1.0;
  double u = std::numeric_limits<double>::quiet_NaN();
  double v = std::numeric_limits<double>::quiet_NaN();
};

double overlap_A(std::span<const double> w, std::span<const double> wstar,
                 std::span<const double> p);
double norm_B(std::span<const double> w, std::span<const double> p);
PopulationStats population_stats(std::span<const double> w, std::span<const double> wstar,
                                 std::span<const double> p);

/// x^n by repeated multiplication (exact sign handling for negative x).
double ipow(double x, std::size_t n);

/// Expected loss 0.5 * (B^k - 2 A^k + 1). Requires w* in {-1,+1}^d.
/// Evaluated through the offsets u, v when available, which keeps full
/// relative precision near the minimizers.
double population_loss(std::span<const double> w, std::span<const double> wstar,
                       std::span<const double> p, std::size_t k);
double population_loss(const PopulationStats& s, std::size_t k);

/// Gradient k p_j (B^{k-1} w_j - A^{k-1} w*_j).
std::vector<double> population_gradient(std::span<const double> w, std::span<const double> wstar,
                                        std::span<const double> p, std::size_t k);
void population_gradient_into(std::span<const double> w, std::span<const double> wstar,
                              std::span<const double> p, std::size_t k, const PopulationStats& s,
                              std::span<double> out);

/// Exact Hessian, row-major d x d:
/// k B^{k-1} D + 2k(k-1) B^{k-2} (Dw)(Dw)^T - k(k-1) A^{k-2} (D w*)(D w*)^T.
std::vector<double> population_hessian(std::span<const double> w, std::span<const double> wstar,
                                       std::span<const double> p, std::size_t k);

struct HessianBound {
  double explicit_bound = 0.0;   // 2k(2k-1) p_max |A|^{k-1} + k(k-1) ||p||^2 |A|^{k-2}
  double universal_bound = 0.0;  // 3 k^2 ||p||_2
  bool in_stable_region = true;  // B^k <= 2 |A|^k
  bool degenerate = false;       // A == 0 with k >= 3; explicit_bound set to the universal cap
};

HessianBound hessian_opnorm_bound(std::span<const double> w, std::span<const double> wstar,
                                  std::span<const double> p, std::size_t k);

struct StepRecord {
  std::uint64_t step = 0;
  double loss = 0.0;
  double A = 0.0;
  double B = 0.0;
  double grad_norm = 0.0;
  double recovery_error = 0.0;
  double pl_ratio = 0.0;  // NaN when the loss is (numerically) zero
  std::vector<double> bin_loss;  // restricted population loss per rank bin, if requested
};

struct Checkpoint {
  std::uint64_t step = 0;
  std::vector<double> w;
};

struct TrajectoryLog {
  std::vector<StepRecord> records;
  std::vector<Checkpoint> checkpoints;
  std::vector<double> final_w;
  std::uint64_t steps_run = 0;
  std::optional<std::uint64_t> diverged_at;
};

/// PL ratio ||grad||^2 / (2 k p_min A^{2k-2} L). NaN when L <= 1e-14.
double pl_ratio(double grad_norm_sq, double loss, double A, double p_min, std::size_t k);

/// Population metrics at w, as logged by the trajectory drivers.
StepRecord make_step_record(std::uint64_t step, std::span<const double> w, std::span<const double> wstar,
                            std::span<const double> p, std::size_t k, const RankBins* bins = nullptr,
                            const SkillDistribution* dist = nullptr);

/// Step count from the PL decrement rate:
/// ceil(6 / (eta k p_min A0^{2k-2}) * ln(L0 / target)), clamped to [1, cap].
/// Returns cap when A0 = 0 (the rate gives no finite horizon).
std::uint64_t default_horizon(double eta, std::size_t k, double p_min, double A0, double L0,
                              double target, std::uint64_t cap);

struct TrajectoryOptions {
  std::uint64_t max_steps = 1000;
  std::uint64_t log_every = 1;         // 0 disables per-step records (first/last still logged)
  std::uint64_t checkpoint_every = 0;  // 0 disables checkpoints
  /// Stop once the population loss is at or below this value (checked every step).
  std::optional<double> stop_loss;
  /// When set, each record carries per-bin restricted losses.
  const RankBins* bins = nullptr;
  const SkillDistribution* dist = nullptr;  // required with bins
  /// Optional observer called on every logged record.
  std::function<void(const StepRecord&, std::span<const double> w)> on_record;
};

/// Deterministic population gradient descent
///   w <- w - eta k D (B^{k-1} w - A^{k-1} w*).
/// Records are taken before each update (step 0 is the initial point) and at
/// the final step. Divergence stops the run and sets diverged_at.
TrajectoryLog population_gd_trajectory(std::span<const double> w0, std::span<const double> wstar,
                                       std::span<const double> p, std::size_t k, double eta,
                                       const TrajectoryOptions& options);

}  // namespace plcomp
