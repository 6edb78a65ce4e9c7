#include "plcomp/stages.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace plcomp {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double normalize(std::vector<double>& v) {
  const double n = std::sqrt(dot(v, v));
  if (n > 0.0)
    for (double& x : v) x /= n;
  return n;
}

void remove_component(std::vector<double>& v, std::span<const double> unit) {
  const double c = dot(v, unit);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * unit[i];
}

// C v = (1/n) sum_i x_i (x_i . v)
void apply_cov(std::span<const std::vector<double>> xs, std::span<const double> v,
               std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& x : xs) {
    const double c = dot(x, v);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * x[j];
  }
  const double inv = 1.0 / static_cast<double>(xs.size());
  for (double& o : out) o *= inv;
}

std::vector<double> random_unit(std::size_t d, Rng& rng) {
  std::vector<double> v(d);
  for (;;) {
    for (double& x : v) x = rng.normal(0.0, 1.0);
    if (normalize(v) > 0.0) return v;
  }
}

// Leading eigenpair of the covariance restricted to the complement of `avoid`.
std::pair<std::vector<double>, double> power_iterate(std::span<const std::vector<double>> xs,
                                                     const std::vector<double>* avoid, Rng& rng) {
  const std::size_t d = xs.front().size();
  std::vector<double> v = random_unit(d, rng);
  if (avoid) {
    remove_component(v, *avoid);
    normalize(v);
  }
  std::vector<double> next(d);
  double lambda = 0.0;
  constexpr double kTol = 1e-10;
  constexpr int kMaxIter = 10000;
  for (int it = 0; it < kMaxIter; ++it) {
    apply_cov(xs, v, next);
    if (avoid) remove_component(next, *avoid);
    lambda = dot(next, v);
    if (normalize(next) == 0.0) return {v, 0.0};
    // Fix the sign so the convergence test is not fooled by a flip.
    if (dot(next, v) < 0.0)
      for (double& x : next) x = -x;
    double delta = 0.0;
    for (std::size_t j = 0; j < d; ++j) delta = std::max(delta, std::abs(next[j] - v[j]));
    v.swap(next);
    if (delta < kTol) break;
  }
  apply_cov(xs, v, next);
  lambda = dot(next, v);
  return {v, std::max(lambda, 0.0)};
}

}  // namespace

SkillBins assign_bins(const SkillDistribution& dist, std::size_t num_bins) {
  SkillBins out{RankBins(dist.size(), num_bins), {}, {}};
  out.bin_of_skill.resize(dist.size());
  out.skills.resize(num_bins);
  for (std::size_t r = 0; r < dist.size(); ++r) {
    const std::size_t b = out.bins.bin_of_rank(r);
    const std::size_t skill = dist.skill_at_rank(r);
    out.bin_of_skill[skill] = b;
    out.skills[b].push_back(skill);
  }
  return out;
}

double binwise_population_loss(std::span<const double> w, std::span<const double> wstar,
                               const SkillDistribution& dist, std::size_t k,
                               const RankBins& bins, std::size_t bin) {
  if (bin >= bins.num_bins() || bins.size(bin) == 0)
    throw std::invalid_argument("binwise_population_loss: empty or unknown bin");
  if (bins.num_ranks() != dist.size() || w.size() != dist.size() || wstar.size() != dist.size())
    throw std::invalid_argument("binwise_population_loss: size mismatch");
  const std::size_t n = bins.size(bin);
  std::vector<double> wb(n), sb(n), pb(n);
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = dist.skill_at_rank(bins.start(bin) + i);
    wb[i] = w[s];
    sb[i] = wstar[s];
    mass += pb[i] = dist.weight(s);
  }
  for (double& p : pb) p /= mass;
  return population_loss(population_stats(wb, sb, pb), k);
}

double tail_gradient_norm(std::span<const double> w, const HiddenSkillVector& wstar,
                          const SkillDistribution& dist, std::size_t k, const SkillBins& bins,
                          std::size_t tail_bin, std::span<const std::size_t> context_bins,
                          std::size_t num_samples, Rng& rng) {
  if (k == 0) throw std::invalid_argument("tail_gradient_norm: k must be >= 1");
  if (tail_bin >= bins.skills.size() || bins.skills[tail_bin].empty())
    throw std::invalid_argument("tail_gradient_norm: empty tail bin");
  std::vector<std::size_t> context;
  for (std::size_t b : context_bins) {
    if (b >= bins.skills.size()) throw std::invalid_argument("tail_gradient_norm: unknown bin");
    context.insert(context.end(), bins.skills[b].begin(), bins.skills[b].end());
  }
  if (k >= 2 && context.empty()) throw std::invalid_argument("tail_gradient_norm: empty context");
  if (num_samples == 0) throw std::invalid_argument("tail_gradient_norm: need samples");

  const auto& tail = bins.skills[tail_bin];
  std::vector<double> tail_w(tail.size());
  for (std::size_t i = 0; i < tail.size(); ++i) tail_w[i] = dist.weight(tail[i]);
  std::vector<double> ctx_w(context.size());
  for (std::size_t i = 0; i < context.size(); ++i) ctx_w[i] = dist.weight(context[i]);
  const DiscreteSampler tail_sampler(tail_w);
  const DiscreteSampler ctx_sampler = context.empty() ? DiscreteSampler{} : DiscreteSampler(ctx_w);

  Sample s;
  s.indices.resize(k);
  std::vector<double> g(w.size(), 0.0);
  double total = 0.0;
  for (std::size_t n = 0; n < num_samples; ++n) {
    const std::size_t tail_pos = rng.below(k);
    for (std::size_t t = 0; t < k; ++t)
      s.indices[t] = t == tail_pos ? tail[tail_sampler(rng)] : context[ctx_sampler(rng)];
    s.label = label_of(wstar, s.indices);
    for (std::size_t i : s.indices) g[i] = 0.0;
    accumulate_sample_gradient(w, s, 1.0, g);
    double sq = 0.0;
    // Repeated indices share one coordinate; visit each once.
    for (std::size_t t = 0; t < k; ++t) {
      const std::size_t i = s.indices[t];
      if (std::find(s.indices.begin(), s.indices.begin() + static_cast<std::ptrdiff_t>(t), i) ==
          s.indices.begin() + static_cast<std::ptrdiff_t>(t))
        sq += g[i] * g[i];
    }
    total += std::sqrt(sq);
  }
  return total / static_cast<double>(num_samples);
}

StageReport detect_stages(std::span<const StepRecord> records, const StageThresholds& thresholds) {
  StageReport rep;
  if (records.empty()) return rep;
  const double l0 = records.front().loss;
  const std::size_t num_bins = records.front().bin_loss.size();
  if (l0 <= 1e-14) {
    // Started at a minimizer (same cutoff as the PL check): rounding in the bin
    // statistics must not hide it.
    rep.stage1_exit_step = records.front().step;
    if (num_bins > 0) rep.stage2_entry_step = records.front().step;
  }
  for (const auto& r : records) {
    if (!rep.stage1_exit_step && r.loss <= (1.0 - thresholds.total_drop) * l0)
      rep.stage1_exit_step = r.step;
    if (!rep.stage2_entry_step && num_bins > 0 &&
        r.bin_loss.front() <= thresholds.head_bin_fraction * l0)
      rep.stage2_entry_step = r.step;
  }
  rep.bin_halving_step.resize(num_bins);
  for (std::size_t b = 0; b < num_bins; ++b)
    rep.bin_halving_step[b] =
        first_fraction_step(records, 0.5, [b](const StepRecord& r) { return r.bin_loss[b]; });
  return rep;
}

PcaResult pca_top2(std::span<const std::vector<double>> diffs, std::uint64_t seed) {
  if (diffs.size() < 2) throw std::invalid_argument("pca_top2: need at least two vectors");
  const std::size_t d = diffs.front().size();
  if (d < 2) throw std::invalid_argument("pca_top2: need dimension >= 2");
  for (const auto& x : diffs)
    if (x.size() != d) throw std::invalid_argument("pca_top2: ragged input");

  std::vector<double> mean(d, 0.0);
  for (const auto& x : diffs)
    for (std::size_t j = 0; j < d; ++j) mean[j] += x[j];
  for (double& m : mean) m /= static_cast<double>(diffs.size());
  std::vector<std::vector<double>> centered(diffs.begin(), diffs.end());
  double trace = 0.0;
  double raw_trace = 0.0;
  for (auto& x : centered)
    for (std::size_t j = 0; j < d; ++j) {
      raw_trace += x[j] * x[j];
      x[j] -= mean[j];
      trace += x[j] * x[j];
    }
  // Identical diffs leave nothing after centering; fall back to the raw second
  // moment so the common direction is still reported.
  if (!(trace > 1e-24 * raw_trace)) {
    centered.assign(diffs.begin(), diffs.end());
    trace = raw_trace;
  }
  trace /= static_cast<double>(diffs.size());

  Rng rng(derive_seed(seed, "pca"));
  PcaResult out;
  if (!(trace > 0.0)) {
    out.dir1 = random_unit(d, rng);
    out.dir2 = random_unit(d, rng);
    remove_component(out.dir2, out.dir1);
    normalize(out.dir2);
    out.dir2_degenerate = true;
    return out;
  }
  auto [v1, l1] = power_iterate(centered, nullptr, rng);
  auto [v2, l2] = power_iterate(centered, &v1, rng);
  // Re-orthogonalize to machine precision.
  remove_component(v2, v1);
  normalize(v2);
  out.dir1 = std::move(v1);
  out.dir2 = std::move(v2);
  out.explained1 = std::min(1.0, l1 / trace);
  out.explained2 = std::min(1.0 - out.explained1, l2 / trace);
  if (!(l2 > 1e-12 * l1)) {
    out.dir2_degenerate = true;
    out.explained2 = 0.0;
  }
  return out;
}

std::vector<std::vector<double>> checkpoint_diffs(std::span<const Checkpoint> checkpoints) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    std::vector<double> d(checkpoints[i].w);
    for (std::size_t j = 0; j < d.size(); ++j) d[j] -= checkpoints[i - 1].w[j];
    out.push_back(std::move(d));
  }
  return out;
}

double LandscapeSlice::coord(double extent, std::size_t i) const {
  if (resolution <= 1) return 0.0;
  const double half = static_cast<double>(resolution - 1) / 2.0;
  return extent * (static_cast<double>(i) - half) / half;
}

LandscapeSlice landscape_slice(std::span<const double> center, std::span<const double> dir1,
                               std::span<const double> dir2, double extent1, double extent2,
                               std::size_t resolution, std::span<const double> wstar,
                               std::span<const double> p, std::size_t k) {
  const std::size_t d = center.size();
  if (dir1.size() != d || dir2.size() != d)
    throw std::invalid_argument("landscape_slice: direction length mismatch");
  if (resolution == 0) throw std::invalid_argument("landscape_slice: resolution must be >= 1");
  LandscapeSlice s;
  s.center.assign(center.begin(), center.end());
  s.dir1.assign(dir1.begin(), dir1.end());
  s.dir2.assign(dir2.begin(), dir2.end());
  s.extent1 = extent1;
  s.extent2 = extent2;
  s.resolution = resolution % 2 == 1 ? resolution : resolution + 1;
  s.grid.resize(s.resolution * s.resolution);
  std::vector<double> x(d);
  for (std::size_t i1 = 0; i1 < s.resolution; ++i1) {
    const double a = s.coord(extent1, i1);
    for (std::size_t i2 = 0; i2 < s.resolution; ++i2) {
      const double b = s.coord(extent2, i2);
      for (std::size_t j = 0; j < d; ++j) x[j] = center[j] + a * dir1[j] + b * dir2[j];
      s.grid[i1 * s.resolution + i2] = population_loss(x, wstar, p, k);
    }
  }
  return s;
}

std::vector<std::pair<double, double>> project_onto_slice(const LandscapeSlice& slice,
                                                          std::span<const Checkpoint> points) {
  std::vector<std::pair<double, double>> out;
  out.reserve(points.size());
  for (const auto& c : points) {
    double a = 0.0;
    double b = 0.0;
    for (std::size_t j = 0; j < slice.center.size(); ++j) {
      const double x = c.w[j] - slice.center[j];
      a += x * slice.dir1[j];
      b += x * slice.dir2[j];
    }
    out.emplace_back(a, b);
  }
  return out;
}

double max_slope_within(const LandscapeSlice& slice, double radius, std::span<const double> wstar,
                        std::span<const double> p, std::size_t k) {
  const std::size_t d = slice.center.size();
  std::vector<double> x(d);
  double best = 0.0;
  for (std::size_t i1 = 0; i1 < slice.resolution; ++i1) {
    const double a = slice.coord(slice.extent1, i1);
    for (std::size_t i2 = 0; i2 < slice.resolution; ++i2) {
      const double b = slice.coord(slice.extent2, i2);
      if (a * a + b * b > radius * radius * (1.0 + 1e-12)) continue;
      for (std::size_t j = 0; j < d; ++j) x[j] = slice.center[j] + a * slice.dir1[j] + b * slice.dir2[j];
      const auto g = population_gradient(x, wstar, p, k);
      best = std::max(best, std::hypot(dot(g, slice.dir1), dot(g, slice.dir2)));
    }
  }
  return best;
}

}  // namespace plcomp
