#include "plcomp/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace plcomp {

namespace {

double l2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

}  // namespace

PlCheck check_pl_inequality(std::span<const StepRecord> records, double p_min, std::size_t k) {
  PlCheck out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.ratios.reserve(records.size());
  for (const auto& r : records) {
    const double ratio = pl_ratio(r.grad_norm * r.grad_norm, r.loss, r.A, p_min, k);
    out.ratios.push_back(ratio);
    if (std::isnan(ratio)) {
      ++out.skipped;
      continue;
    }
    ++out.evaluated;
    out.min_ratio = std::min(out.min_ratio, ratio);
    if (ratio < 1.0 - 1e-9) out.passed = false;
  }
  return out;
}

StationaryReport check_stationary_points(const HiddenSkillVector& wstar, std::span<const double> p,
                                         std::size_t k, std::size_t num_probes, Rng& rng) {
  const std::size_t d = wstar.size();
  if (p.size() != d) throw std::invalid_argument("check_stationary_points: size mismatch");
  StationaryReport rep;
  const std::vector<double> zero(d, 0.0);
  const auto minus = wstar.negated();
  rep.grad_norm_origin = l2(population_gradient(zero, wstar.values(), p, k));
  rep.grad_norm_plus = l2(population_gradient(wstar.values(), wstar.values(), p, k));
  rep.grad_norm_minus = l2(population_gradient(minus.values(), wstar.values(), p, k));
  rep.min_probe_grad_norm = std::numeric_limits<double>::infinity();
  std::vector<double> w(d);
  while (rep.num_probes < num_probes) {
    // Mix scales so probes cover both the flat region and the far field.
    const double scale = std::pow(10.0, -2.0 + 2.5 * rng.uniform01());
    for (double& x : w) x = rng.normal(0.0, scale);
    double to_zero = 0.0;
    for (double x : w) to_zero = std::max(to_zero, std::abs(x));
    if (to_zero < 1e-3 || recovery_error(w, wstar.values()) < 1e-3) continue;
    rep.min_probe_grad_norm =
        std::min(rep.min_probe_grad_norm, l2(population_gradient(w, wstar.values(), p, k)));
    ++rep.num_probes;
  }
  if (num_probes == 0) rep.min_probe_grad_norm = 0.0;
  // -w* predicts -y when k is odd, so it is only a fixed point for even k.
  const bool minus_ok = k % 2 == 1 || rep.grad_norm_minus <= 1e-12;
  rep.passed = rep.grad_norm_origin <= 1e-12 && rep.grad_norm_plus <= 1e-12 && minus_ok &&
               (num_probes == 0 || rep.min_probe_grad_norm > 0.0);
  return rep;
}

InitConcentration check_init_concentration(std::size_t d, double r, std::span<const double> p,
                                           std::size_t num_trials, Rng& rng,
                                           const InitBrackets& brackets) {
  if (p.size() != d) throw std::invalid_argument("check_init_concentration: size mismatch");
  if (num_trials == 0) throw std::invalid_argument("check_init_concentration: need trials");
  const double p_norm = l2(p);
  const std::vector<double> ones(d, 1.0);
  std::vector<double> a_ratio(num_trials);
  std::vector<double> b_ratio(num_trials);
  std::vector<double> abs_a(num_trials);
  std::size_t a_in = 0;
  std::size_t b_in = 0;
  for (std::size_t t = 0; t < num_trials; ++t) {
    const auto state = init_gaussian(d, r, rng);
    const auto s = population_stats(state.w, ones, p);
    abs_a[t] = std::abs(s.A);
    a_ratio[t] = abs_a[t] / (r * p_norm);
    b_ratio[t] = std::abs(s.B - r * r) / (r * r * p_norm);
    if (a_ratio[t] >= brackets.a_lo && a_ratio[t] <= brackets.a_hi) ++a_in;
    if (b_ratio[t] <= brackets.b_hi) ++b_in;
  }
  InitConcentration out;
  out.trials = num_trials;
  for (double q : {0.01, 0.25, 0.5, 0.75, 0.99}) {
    out.a_ratio_quantiles.push_back(quantile(a_ratio, q));
    out.b_ratio_quantiles.push_back(quantile(b_ratio, q));
  }
  out.median_abs_a = median(abs_a);
  out.a_bracket_fraction = static_cast<double>(a_in) / static_cast<double>(num_trials);
  out.b_bracket_fraction = static_cast<double>(b_in) / static_cast<double>(num_trials);
  out.passed = out.a_bracket_fraction >= 0.99 && out.b_bracket_fraction >= 0.99;
  return out;
}

GradientNoiseStats estimate_gradient_noise(std::span<const double> w, const HiddenSkillVector& wstar,
                                           const SkillDistribution& dist, std::size_t k,
                                           std::size_t batch_size, std::size_t num_batches,
                                           Rng& rng) {
  if (batch_size == 0 || num_batches == 0)
    throw std::invalid_argument("estimate_gradient_noise: need batches");
  const std::size_t d = w.size();
  const auto pop = population_gradient(w, wstar.values(), dist.weights(), k);
  const double pop_norm = l2(pop);
  std::vector<double> g(d);
  Sample s;
  double total = 0.0;
  std::size_t violations = 0;
  const double inv_b = 1.0 / static_cast<double>(batch_size);
  for (std::size_t n = 0; n < num_batches; ++n) {
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t b = 0; b < batch_size; ++b) {
      s = generate_sample(wstar, dist, k, rng);
      accumulate_sample_gradient(w, s, inv_b, g);
    }
    for (std::size_t j = 0; j < d; ++j) g[j] -= pop[j];
    const double noise = l2(g);
    total += noise;
    if (noise > pop_norm / 8.0) ++violations;
  }
  GradientNoiseStats out;
  out.batch_size = batch_size;
  out.num_batches = num_batches;
  out.mean_noise_norm = total / static_cast<double>(num_batches);
  out.population_grad_norm = pop_norm;
  out.ratio = pop_norm > 0.0 ? out.mean_noise_norm / pop_norm
                             : (out.mean_noise_norm > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  out.violation_fraction = static_cast<double>(violations) / static_cast<double>(num_batches);
  return out;
}

double hoeffding_overlap_bound(std::size_t d, std::size_t q, double delta) {
  const double qq = static_cast<double>(q);
  return std::sqrt(2.0 * std::log(2.0 * qq * qq / delta) / static_cast<double>(d));
}

CsqPackingReport csq_packing(const CsqPackingConfig& config) {
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0 + 1e-15))
    throw std::invalid_argument("csq_packing: epsilon must be in (0, 1]");
  if (config.d == 0 || config.num_vectors < 2)
    throw std::invalid_argument("csq_packing: need d >= 1 and at least two vectors");
  Rng rng(derive_seed(config.seed, "csq"));
  std::vector<std::vector<int>> vs(config.num_vectors, std::vector<int>(config.d));
  for (auto& v : vs)
    for (int& x : v) x = rng.coin() ? 1 : -1;
  long long best = 0;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      long long dotp = 0;
      for (std::size_t t = 0; t < config.d; ++t) dotp += vs[i][t] * vs[j][t];
      best = std::max(best, dotp < 0 ? -dotp : dotp);
    }
  CsqPackingReport rep;
  rep.max_overlap = static_cast<double>(best) / static_cast<double>(config.d);
  rep.max_correlation = ipow(rep.max_overlap, config.k);
  rep.packing_budget = std::exp(config.epsilon * config.epsilon * static_cast<double>(config.d) / 4.0);
  rep.within_budget = static_cast<double>(config.num_vectors) <= rep.packing_budget;
  rep.passed = rep.max_overlap <= config.epsilon;
  return rep;
}

namespace {

struct ArmTrace {
  std::vector<double> error_at_budget;
  std::vector<double> loss_at_budget;
  std::optional<std::uint64_t> success_samples;
  double loss_at_extra = 0.0;
};

std::uint64_t steps_for(std::uint64_t samples, std::size_t batch) {
  return (samples + batch - 1) / batch;
}

// Runs one SGD arm, recording at each budget (in samples) and optionally
// searching for the first checked step with recovery error <= success_error.
ArmTrace run_arm(const SeparationConfig& cfg, const SkillDistribution& dist,
                 const HiddenSkillVector& wstar, const ModelState& init, std::uint64_t data_seed,
                 bool search_success, std::optional<std::uint64_t> extra_budget) {
  ModelState state = init;
  Rng data(data_seed);
  const double eta = default_eta(cfg.k, dist.l2_norm());
  std::vector<std::uint64_t> budget_steps;
  for (auto b : cfg.sample_budgets) budget_steps.push_back(steps_for(b, cfg.batch_size));
  const std::uint64_t extra_steps = extra_budget ? steps_for(*extra_budget, cfg.batch_size) : 0;
  std::uint64_t horizon = extra_steps;
  for (auto s : budget_steps) horizon = std::max(horizon, s);
  const std::uint64_t search_cap = steps_for(cfg.max_samples, cfg.batch_size);
  if (search_success) horizon = std::max(horizon, search_cap);

  ArmTrace out;
  out.error_at_budget.assign(budget_steps.size(), 0.0);
  out.loss_at_budget.assign(budget_steps.size(), 0.0);
  const auto p = dist.weights();
  auto observe = [&](std::uint64_t t) {
    for (std::size_t i = 0; i < budget_steps.size(); ++i)
      if (budget_steps[i] == t) {
        out.error_at_budget[i] = recovery_error(state.w, wstar.values());
        out.loss_at_budget[i] = population_loss(state.w, wstar.values(), p, cfg.k);
      }
    if (extra_budget && t == extra_steps)
      out.loss_at_extra = population_loss(state.w, wstar.values(), p, cfg.k);
    if (search_success && !out.success_samples && t % cfg.check_every_steps == 0 &&
        recovery_error(state.w, wstar.values()) <= cfg.success_error)
      out.success_samples = t * cfg.batch_size;
  };
  for (std::uint64_t t = 0;; ++t) {
    observe(t);
    std::uint64_t needed = extra_steps;
    for (auto s : budget_steps) needed = std::max(needed, s);
    if (t >= needed && (!search_success || out.success_samples || t >= search_cap)) break;
    if (t >= horizon) break;
    minibatch_step(state, dist, wstar, cfg.k, eta, cfg.batch_size, data);
  }
  return out;
}

}  // namespace

SeparationResult separation_experiment(const SeparationConfig& cfg) {
  if (cfg.num_seeds == 0) throw std::invalid_argument("separation_experiment: need seeds");
  if (cfg.batch_size == 0 || cfg.check_every_steps == 0)
    throw std::invalid_argument("separation_experiment: batch size and check cadence must be >= 1");
  const auto zipf = SkillDistribution::make({DistributionKind::Zipf, cfg.d, cfg.alpha, cfg.d, Ordering::identity()});
  const auto unif = SkillDistribution::make({DistributionKind::Uniform, cfg.d, 0.0, cfg.d, Ordering::identity()});

  SeparationResult res;
  struct Trial {
    HiddenSkillVector wstar;
    ModelState init;
    std::uint64_t data_seed;
  };
  std::vector<Trial> trials;
  for (std::size_t i = 0; i < cfg.num_seeds; ++i) {
    const std::uint64_t seed = derive_seed(cfg.root_seed, "separation", i);
    res.seeds.push_back(seed);
    Rng wrng(derive_seed(seed, "wstar"));
    Rng irng(derive_seed(seed, "init"));
    auto wstar = HiddenSkillVector::rademacher(cfg.d, wrng);
    auto init = init_gaussian(cfg.d, cfg.r, irng);
    trials.push_back({std::move(wstar), std::move(init), derive_seed(seed, "data")});
  }

  std::vector<ArmTrace> zipf_traces;
  for (const auto& t : trials)
    zipf_traces.push_back(run_arm(cfg, zipf, t.wstar, t.init, t.data_seed, true, std::nullopt));

  std::vector<double> successes;
  for (const auto& z : zipf_traces) {
    res.zipf_budget_to_success.push_back(z.success_samples);
    successes.push_back(z.success_samples ? static_cast<double>(*z.success_samples)
                                          : std::numeric_limits<double>::infinity());
  }
  std::sort(successes.begin(), successes.end());
  // Lower median keeps N* an actual observed budget.
  const double mid = successes[(successes.size() - 1) / 2];
  if (std::isfinite(mid)) res.median_success_budget = static_cast<std::uint64_t>(mid);

  std::vector<ArmTrace> unif_traces;
  for (const auto& t : trials)
    unif_traces.push_back(
        run_arm(cfg, unif, t.wstar, t.init, t.data_seed, false, res.median_success_budget));

  auto curve = [&](const std::vector<ArmTrace>& traces) {
    std::vector<SeparationArmPoint> pts;
    for (std::size_t b = 0; b < cfg.sample_budgets.size(); ++b) {
      std::vector<double> errs;
      std::vector<double> losses;
      for (const auto& tr : traces) {
        errs.push_back(tr.error_at_budget[b]);
        losses.push_back(tr.loss_at_budget[b]);
      }
      pts.push_back({cfg.sample_budgets[b], median(errs), median(losses)});
    }
    return pts;
  };
  res.zipf_curve = curve(zipf_traces);
  res.uniform_curve = curve(unif_traces);
  if (res.median_success_budget) {
    for (const auto& u : unif_traces) res.uniform_loss_at_success_budget.push_back(u.loss_at_extra);
    res.median_uniform_loss_at_success_budget = median(res.uniform_loss_at_success_budget);
  }
  return res;
}

}  // namespace plcomp
