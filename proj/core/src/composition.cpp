#include "plcomp/composition.hpp"

#include <algorithm>
#include <cmath>

namespace plcomp {

namespace {

void fill_sample(Sample& s, const HiddenSkillVector& wstar, const SkillDistribution& dist,
                 std::size_t k, Rng& rng) {
  s.indices.resize(k);
  double y = 1.0;
  for (std::size_t t = 0; t < k; ++t) {
    s.indices[t] = dist.sample(rng);
    y *= wstar[s.indices[t]];
  }
  s.label = y;
}

void check_indices(std::size_t d, const Sample& sample) {
  for (std::size_t i : sample.indices)
    if (i >= d) throw std::invalid_argument("sample index out of range");
}

void apply_update(ModelState& state, std::span<const double> grad, double scale) {
  for (std::size_t i = 0; i < state.w.size(); ++i) {
    state.w[i] -= scale * grad[i];
    if (!std::isfinite(state.w[i]))
      throw DivergenceError(state.step + 1, "non-finite parameter after update at step " +
                                                std::to_string(state.step + 1));
  }
  ++state.step;
}

}  // namespace

HiddenSkillVector::HiddenSkillVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("HiddenSkillVector: empty");
  for (double v : values_)
    if (v != 1.0 && v != -1.0)
      throw std::invalid_argument("HiddenSkillVector: entries must be exactly +1 or -1");
}

HiddenSkillVector HiddenSkillVector::ones(std::size_t d) {
  return HiddenSkillVector(std::vector<double>(d, 1.0));
}

HiddenSkillVector HiddenSkillVector::rademacher(std::size_t d, Rng& rng) {
  std::vector<double> v(d);
  for (double& x : v) x = rng.coin() ? 1.0 : -1.0;
  return HiddenSkillVector(std::move(v));
}

HiddenSkillVector HiddenSkillVector::negated() const {
  std::vector<double> v(values_);
  for (double& x : v) x = -x;
  return HiddenSkillVector(std::move(v));
}

ModelState init_gaussian(std::size_t d, double r, Rng& rng) {
  if (d == 0) throw std::invalid_argument("init_gaussian: d must be >= 1");
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("init_gaussian: r must be > 0");
  ModelState s;
  s.w.resize(d);
  std::normal_distribution<double> normal(0.0, r);
  for (double& x : s.w) x = normal(rng.engine());
  s.init_scale = r;
  return s;
}

Sample generate_sample(const HiddenSkillVector& wstar, const SkillDistribution& dist,
                       std::size_t k, Rng& rng) {
  if (k == 0) throw std::invalid_argument("generate_sample: k must be >= 1");
  if (wstar.size() != dist.size())
    throw std::invalid_argument("generate_sample: w* and distribution sizes differ");
  Sample s;
  fill_sample(s, wstar, dist, k, rng);
  return s;
}

double label_of(const HiddenSkillVector& wstar, std::span<const std::size_t> indices) {
  double y = 1.0;
  for (std::size_t i : indices) {
    if (i >= wstar.size()) throw std::invalid_argument("label_of: index out of range");
    y *= wstar[i];
  }
  return y;
}

double predict(std::span<const double> w, const Sample& sample) {
  check_indices(w.size(), sample);
  double f = 1.0;
  for (std::size_t i : sample.indices) f *= w[i];
  return f;
}

double sample_loss(std::span<const double> w, const Sample& sample) {
  const double r = predict(w, sample) - sample.label;
  return 0.5 * r * r;
}

double accumulate_sample_gradient(std::span<const double> w, const Sample& sample, double scale,
                                  std::span<double> grad) {
  const std::size_t k = sample.indices.size();
  check_indices(w.size(), sample);
  // prefix[t] = prod_{s<t}, suffix product carried right-to-left.
  thread_local std::vector<double> prefix;
  prefix.resize(k + 1);
  prefix[0] = 1.0;
  for (std::size_t t = 0; t < k; ++t) prefix[t + 1] = prefix[t] * w[sample.indices[t]];
  const double residual = prefix[k] - sample.label;
  double suffix = 1.0;
  for (std::size_t t = k; t-- > 0;) {
    grad[sample.indices[t]] += scale * residual * prefix[t] * suffix;
    suffix *= w[sample.indices[t]];
  }
  return 0.5 * residual * residual;
}

std::vector<double> sample_gradient(std::span<const double> w, const Sample& sample) {
  std::vector<double> g(w.size(), 0.0);
  accumulate_sample_gradient(w, sample, 1.0, g);
  return g;
}

double stability_eta(std::size_t k, double p_l2) {
  const double kk = static_cast<double>(k);
  return 1.0 / (10.0 * kk * kk * p_l2);
}

double default_eta(std::size_t k, double p_l2) { return 0.5 * stability_eta(k, p_l2); }

StepOutcome minibatch_step(ModelState& state, const SkillDistribution& dist,
                           const HiddenSkillVector& wstar, std::size_t k, double eta,
                           std::size_t batch_size, Rng& rng) {
  if (!(eta > 0.0)) throw std::invalid_argument("minibatch_step: eta must be > 0");
  if (batch_size == 0) throw std::invalid_argument("minibatch_step: batch size must be >= 1");
  if (k == 0) throw std::invalid_argument("minibatch_step: k must be >= 1");
  const std::size_t d = state.w.size();
  if (wstar.size() != d || dist.size() != d)
    throw std::invalid_argument("minibatch_step: dimension mismatch");

  thread_local std::vector<double> grad;
  thread_local Sample sample;
  grad.assign(d, 0.0);
  double loss = 0.0;
  for (std::size_t b = 0; b < batch_size; ++b) {
    fill_sample(sample, wstar, dist, k, rng);
    loss += accumulate_sample_gradient(state.w, sample, 1.0, grad);
  }
  const double inv_b = 1.0 / static_cast<double>(batch_size);
  apply_update(state, grad, eta * inv_b);
  return {loss * inv_b, eta > stability_eta(k, dist.l2_norm())};
}

StepOutcome minibatch_step_on(ModelState& state, std::span<const Sample> batch, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("minibatch_step_on: eta must be > 0");
  if (batch.empty()) throw std::invalid_argument("minibatch_step_on: empty batch");
  std::vector<double> grad(state.w.size(), 0.0);
  double loss = 0.0;
  for (const Sample& s : batch) loss += accumulate_sample_gradient(state.w, s, 1.0, grad);
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  apply_update(state, grad, eta * inv_b);
  return {loss * inv_b, false};
}

double recovery_error(std::span<const double> w, std::span<const double> wstar) {
  if (w.size() != wstar.size()) throw std::invalid_argument("recovery_error: length mismatch");
  double minus = 0.0;
  double plus = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    minus = std::max(minus, std::abs(w[i] - wstar[i]));
    plus = std::max(plus, std::abs(w[i] + wstar[i]));
  }
  return std::min(minus, plus);
}

}  // namespace plcomp
