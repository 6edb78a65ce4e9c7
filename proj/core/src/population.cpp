#include "plcomp/population.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "plcomp/composition.hpp"
#include "plcomp/stages.hpp"

namespace plcomp {

namespace {

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(what);
}

void check_signs(std::span<const double> wstar) {
  for (double v : wstar)
    if (v != 1.0 && v != -1.0)
      throw std::invalid_argument("population closed form requires w* entries in {-1,+1}");
}

}  // namespace

double overlap_A(std::span<const double> w, std::span<const double> wstar,
                 std::span<const double> p) {
  check_sizes(w.size(), wstar.size(), "overlap_A: length mismatch");
  check_sizes(w.size(), p.size(), "overlap_A: length mismatch");
  double a = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) a += p[i] * w[i] * wstar[i];
  return a;
}

double norm_B(std::span<const double> w, std::span<const double> p) {
  check_sizes(w.size(), p.size(), "norm_B: length mismatch");
  double b = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) b += p[i] * w[i] * w[i];
  return b;
}

PopulationStats population_stats(std::span<const double> w, std::span<const double> wstar,
                                 std::span<const double> p) {
  PopulationStats s{overlap_A(w, wstar, p), norm_B(w, p)};
  s.sign = s.A < 0.0 ? -1.0 : 1.0;
  double u = 0.0, v = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double e = w[i] - s.sign * wstar[i];
    u += p[i] * e * wstar[i];
    v += p[i] * e * e;
  }
  s.u = s.sign * u;
  s.v = v;
  return s;
}

double ipow(double x, std::size_t n) {
  double r = 1.0;
  for (std::size_t i = 0; i < n; ++i) r *= x;
  return r;
}

namespace {

double binom(std::size_t n, std::size_t j) {
  double c = 1.0;
  for (std::size_t i = 1; i <= j; ++i) c = c * static_cast<double>(n - j + i) / static_cast<double>(i);
  return c;
}

// The offset form applies unless A < 0 with odd k, where A^k != (1 + u)^k.
bool offsets_usable(const PopulationStats& s, std::size_t k) {
  return std::isfinite(s.u) && std::isfinite(s.v) && (s.sign > 0.0 || k % 2 == 0);
}

}  // namespace

double population_loss(const PopulationStats& s, std::size_t k) {
  if (!offsets_usable(s, k)) return 0.5 * (ipow(s.B, k) - 2.0 * ipow(s.A, k) + 1.0);
  // (1 + 2u + v)^k - 2 (1 + u)^k + 1 expanded binomially; the linear terms
  // in u cancel exactly.
  const double x = 2.0 * s.u + s.v;
  double sum = static_cast<double>(k) * s.v;
  for (std::size_t j = 2; j <= k; ++j) sum += binom(k, j) * (ipow(x, j) - 2.0 * ipow(s.u, j));
  return 0.5 * sum;
}

double population_loss(std::span<const double> w, std::span<const double> wstar,
                       std::span<const double> p, std::size_t k) {
  check_signs(wstar);
  return population_loss(population_stats(w, wstar, p), k);
}

void population_gradient_into(std::span<const double> w, std::span<const double> wstar,
                              std::span<const double> p, std::size_t k, const PopulationStats& s,
                              std::span<double> out) {
  if (k == 0) throw std::invalid_argument("population_gradient: k must be >= 1");
  const double kk = static_cast<double>(k);
  const double bk = ipow(s.B, k - 1);
  if (offsets_usable(s, k)) {
    // B^{k-1} w - A^{k-1} w* = B^{k-1} e + (B^{k-1} - (1 + u)^{k-1}) s w*.
    const double x = 2.0 * s.u + s.v;
    double gap = 0.0;
    for (std::size_t j = 1; j < k; ++j) gap += binom(k - 1, j) * (ipow(x, j) - ipow(s.u, j));
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double e = w[j] - s.sign * wstar[j];
      out[j] = kk * p[j] * (bk * e + gap * s.sign * wstar[j]);
    }
    return;
  }
  const double ak = ipow(s.A, k - 1);
  for (std::size_t j = 0; j < w.size(); ++j) out[j] = kk * p[j] * (bk * w[j] - ak * wstar[j]);
}

std::vector<double> population_gradient(std::span<const double> w, std::span<const double> wstar,
                                        std::span<const double> p, std::size_t k) {
  check_signs(wstar);
  std::vector<double> g(w.size());
  population_gradient_into(w, wstar, p, k, population_stats(w, wstar, p), g);
  return g;
}

std::vector<double> population_hessian(std::span<const double> w, std::span<const double> wstar,
                                       std::span<const double> p, std::size_t k) {
  check_signs(wstar);
  const auto s = population_stats(w, wstar, p);
  const std::size_t d = w.size();
  const double kk = static_cast<double>(k);
  const double c_diag = kk * ipow(s.B, k - 1);
  const double c_ww = k >= 2 ? 2.0 * kk * (kk - 1.0) * ipow(s.B, k - 2) : 0.0;
  const double c_ss = k >= 2 ? kk * (kk - 1.0) * ipow(s.A, k - 2) : 0.0;
  std::vector<double> h(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double pw = (p[i] * w[i]) * (p[j] * w[j]);
      const double ps = (p[i] * wstar[i]) * (p[j] * wstar[j]);
      h[i * d + j] = c_ww * pw - c_ss * ps + (i == j ? c_diag * p[i] : 0.0);
    }
  }
  return h;
}

HessianBound hessian_opnorm_bound(std::span<const double> w, std::span<const double> wstar,
                                  std::span<const double> p, std::size_t k) {
  if (k == 0) throw std::invalid_argument("hessian_opnorm_bound: k must be >= 1");
  const auto s = population_stats(w, wstar, p);
  double p_max = 0.0;
  double p_sq = 0.0;
  for (double x : p) {
    p_max = std::max(p_max, x);
    p_sq += x * x;
  }
  const double kk = static_cast<double>(k);
  const double abs_a = std::abs(s.A);
  HessianBound out;
  out.universal_bound = 3.0 * kk * kk * std::sqrt(p_sq);
  out.in_stable_region = ipow(s.B, k) <= 2.0 * ipow(abs_a, k);
  if (abs_a == 0.0 && k >= 3) {
    out.degenerate = true;
    out.explicit_bound = out.universal_bound;
    return out;
  }
  const double second = k >= 2 ? kk * (kk - 1.0) * p_sq * ipow(abs_a, k - 2) : 0.0;
  out.explicit_bound = 2.0 * kk * (2.0 * kk - 1.0) * p_max * ipow(abs_a, k - 1) + second;
  return out;
}

double pl_ratio(double grad_norm_sq, double loss, double A, double p_min, std::size_t k) {
  if (!(loss > 1e-14)) return std::numeric_limits<double>::quiet_NaN();
  const double denom = 2.0 * static_cast<double>(k) * p_min * ipow(A, 2 * k - 2) * loss;
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return grad_norm_sq / denom;
}

StepRecord make_step_record(std::uint64_t step, std::span<const double> w, std::span<const double> wstar,
                            std::span<const double> p, std::size_t k, const RankBins* bins,
                            const SkillDistribution* dist) {
  if (bins != nullptr && dist == nullptr) throw std::invalid_argument("make_step_record: bins need a distribution");
  const auto s = population_stats(w, wstar, p);
  const auto grad = population_gradient(w, wstar, p, k);
  double gsq = 0.0;
  for (double g : grad) gsq += g * g;
  StepRecord r;
  r.step = step;
  r.loss = population_loss(s, k);
  r.A = s.A;
  r.B = s.B;
  r.grad_norm = std::sqrt(gsq);
  r.recovery_error = recovery_error(w, wstar);
  r.pl_ratio = pl_ratio(gsq, r.loss, s.A, *std::min_element(p.begin(), p.end()), k);
  if (bins != nullptr) {
    r.bin_loss.resize(bins->num_bins());
    for (std::size_t b = 0; b < r.bin_loss.size(); ++b)
      r.bin_loss[b] = binwise_population_loss(w, wstar, *dist, k, *bins, b);
  }
  return r;
}

std::uint64_t default_horizon(double eta, std::size_t k, double p_min, double A0, double L0,
                              double target, std::uint64_t cap) {
  if (!(eta > 0.0) || k == 0 || !(p_min > 0.0) || !(target > 0.0))
    throw std::invalid_argument("default_horizon: eta, k, p_min and target must be positive");
  if (cap == 0) throw std::invalid_argument("default_horizon: cap must be >= 1");
  if (L0 <= target) return 1;
  const double rate = eta * static_cast<double>(k) * p_min * ipow(A0, 2 * k - 2);
  const double t = std::ceil(6.0 / rate * std::log(L0 / target));
  if (!std::isfinite(t) || t >= static_cast<double>(cap)) return cap;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(t));
}

TrajectoryLog population_gd_trajectory(std::span<const double> w0, std::span<const double> wstar,
                                       std::span<const double> p, std::size_t k, double eta,
                                       const TrajectoryOptions& options) {
  check_sizes(w0.size(), wstar.size(), "population_gd_trajectory: length mismatch");
  check_sizes(w0.size(), p.size(), "population_gd_trajectory: length mismatch");
  check_signs(wstar);
  if (k == 0) throw std::invalid_argument("population_gd_trajectory: k must be >= 1");
  if (!(eta > 0.0)) throw std::invalid_argument("population_gd_trajectory: eta must be > 0");
  if (options.bins != nullptr && options.dist == nullptr)
    throw std::invalid_argument("population_gd_trajectory: bins need a distribution");

  const std::size_t d = w0.size();
  const double p_min = *std::min_element(p.begin(), p.end());
  std::vector<double> w(w0.begin(), w0.end());
  std::vector<double> grad(d);
  TrajectoryLog log;

  auto record = [&](std::uint64_t step, const PopulationStats& s, double loss, double gsq) {
    StepRecord r;
    r.step = step;
    r.loss = loss;
    r.A = s.A;
    r.B = s.B;
    r.grad_norm = std::sqrt(gsq);
    r.recovery_error = recovery_error(w, wstar);
    r.pl_ratio = pl_ratio(gsq, loss, s.A, p_min, k);
    if (options.bins != nullptr) {
      r.bin_loss.resize(options.bins->num_bins());
      for (std::size_t b = 0; b < r.bin_loss.size(); ++b)
        r.bin_loss[b] = binwise_population_loss(w, wstar, *options.dist, k, *options.bins, b);
    }
    if (options.on_record) options.on_record(r, w);
    log.records.push_back(std::move(r));
  };

  for (std::uint64_t t = 0;; ++t) {
    const auto s = population_stats(w, wstar, p);
    const double loss = population_loss(s, k);
    population_gradient_into(w, wstar, p, k, s, grad);
    double gsq = 0.0;
    for (double g : grad) gsq += g * g;

    const bool stop = t >= options.max_steps || (options.stop_loss && loss <= *options.stop_loss);
    const bool logged = stop || (options.log_every > 0 && t % options.log_every == 0) || t == 0;
    if (logged) record(t, s, loss, gsq);
    if (options.checkpoint_every > 0 && (t % options.checkpoint_every == 0 || stop))
      log.checkpoints.push_back({t, w});
    if (stop) {
      log.steps_run = t;
      break;
    }

    bool finite = true;
    for (std::size_t j = 0; j < d; ++j) {
      w[j] -= eta * grad[j];
      finite = finite && std::isfinite(w[j]);
    }
    if (!finite) {
      log.diverged_at = t + 1;
      log.steps_run = t + 1;
      break;
    }
  }
  log.final_w = std::move(w);
  return log;
}

}  // namespace plcomp
