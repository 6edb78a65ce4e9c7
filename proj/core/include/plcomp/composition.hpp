#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "plcomp/distributions.hpp"
#include "plcomp/rng.hpp"

namespace plcomp {

/// Ground-truth signs w* in {-1, +1}^d.
class HiddenSkillVector {
 public:
  /// Throws std::invalid_argument if any entry is not exactly +-1.
  explicit HiddenSkillVector(std::vector<double> values);

  static HiddenSkillVector ones(std::size_t d);
  static HiddenSkillVector rademacher(std::size_t d, Rng& rng);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  HiddenSkillVector negated() const;

 private:
  std::vector<double> values_;
};

struct Sample {
  std::vector<std::size_t> indices;  // k skill indices, repeats allowed
  double label = 1.0;                // product of w* over indices
};

struct ModelState {
  std::vector<double> w;
  std::uint64_t step = 0;
  double init_scale = 0.0;
};

/// Thrown when an update produces a non-finite coordinate.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::uint64_t step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  std::uint64_t step() const { return step_; }

 private:
  std::uint64_t step_;
};

/// w(0) ~ N(0, r^2 I_d).
ModelState init_gaussian(std::size_t d, double r, Rng& rng);

Sample generate_sample(const HiddenSkillVector& wstar, const SkillDistribution& dist,
                       std::size_t k, Rng& rng);

/// Label for a fixed index sequence.
double label_of(const HiddenSkillVector& wstar, std::span<const std::size_t> indices);

/// f_w(X) = prod_t w[x_t].
double predict(std::span<const double> w, const Sample& sample);

/// 0.5 * (f_w(X) - y)^2
double sample_loss(std::span<const double> w, const Sample& sample);

/// Adds `scale` times the per-sample gradient into `grad` (length d) and
/// returns the sample loss. Only the <= k touched coordinates change.
///
/// Coordinate i receives (f - y) * sum over positions t with x_t = i of the
/// leave-one-out product prod_{s != t} w[x_s]; leave-one-out products come
/// from prefix/suffix products so zero coordinates need no special casing.
double accumulate_sample_gradient(std::span<const double> w, const Sample& sample, double scale,
                                  std::span<double> grad);

std::vector<double> sample_gradient(std::span<const double> w, const Sample& sample);

/// Stability bound 1 / (10 k^2 ||p||_2).
double stability_eta(std::size_t k, double p_l2);
/// Default step size 1 / (20 k^2 ||p||_2), half the stability bound.
double default_eta(std::size_t k, double p_l2);

struct StepOutcome {
  double batch_loss = 0.0;
  bool eta_above_stability = false;
};

/// One minibatch SGD update with `batch_size` fresh samples.
/// Throws DivergenceError when an updated coordinate is non-finite.
StepOutcome minibatch_step(ModelState& state, const SkillDistribution& dist,
                           const HiddenSkillVector& wstar, std::size_t k, double eta,
                           std::size_t batch_size, Rng& rng);

/// Same update on a caller-supplied batch. Used by tests that need control
/// over the exact samples.
StepOutcome minibatch_step_on(ModelState& state, std::span<const Sample> batch, double eta);

/// min(||w - w*||_inf, ||w + w*||_inf)
double recovery_error(std::span<const double> w, std::span<const double> wstar);

}  // namespace plcomp
