#include "plcomp/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "plcomp/arithmetic.hpp"
#include "plcomp/composition.hpp"
#include "plcomp/csv.hpp"
#include "plcomp/dataset.hpp"
#include "plcomp/gsm.hpp"
#include "plcomp/multihop.hpp"
#include "plcomp/population.hpp"
#include "plcomp/probes.hpp"
#include "plcomp/s5.hpp"
#include "plcomp/stages.hpp"

namespace plcomp {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void run_work_queue(std::size_t n, std::size_t parallelism, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(std::max<std::size_t>(parallelism, 1), n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<std::string> config_warnings(const ExperimentConfig& c) {
  std::vector<std::string> out;
  const bool uses_task = c.kind != ExperimentKind::GenData;
  if (uses_task && c.task.k % 2 == 1)
    out.push_back("k=" + std::to_string(c.task.k) +
                  " is odd: +w* and -w* are no longer both minimizers and the sign symmetry is lost");
  if (uses_task && c.task.eta) {
    const auto dist = SkillDistribution::make(c.distribution);
    const double bound = stability_eta(c.task.k, dist.l2_norm());
    if (*c.task.eta > bound)
      out.push_back("eta=" + format_double(*c.task.eta) + " exceeds the stability bound " + format_double(bound));
  }
  return out;
}

namespace {

// Collects artifacts written by concurrent trials; paths are relative to root.
class ArtifactSink {
 public:
  explicit ArtifactSink(fs::path root) : root_(std::move(root)) {}

  void write(const fs::path& rel, std::string_view content) {
    write_text_file(root_ / rel, content);
    std::lock_guard lock(mu_);
    files_.push_back({rel.generic_string(), sha256_hex(content), content.size()});
  }

  std::vector<fs::path> finish(const ExperimentConfig& cfg, const std::vector<TrialStatus>& trials,
                               std::size_t diverged) {
    std::sort(files_.begin(), files_.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
    ordered_json m;
    m["config_hash"] = config_hash(cfg);
    m["experiment"] = to_string(cfg.kind);
    ordered_json files = ordered_json::array();
    for (const auto& f : files_) files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    m["files"] = files;
    ordered_json tj = ordered_json::array();
    for (const auto& t : trials) {
      ordered_json e{{"name", t.name}, {"diverged", t.diverged}};
      if (!t.note.empty()) e["note"] = t.note;
      tj.push_back(e);
    }
    m["trials"] = tj;
    m["diverged"] = diverged;
    write_text_file(root_ / "manifest.json", m.dump(2) + "\n");
    std::vector<fs::path> out;
    for (const auto& f : files_) out.emplace_back(f.path);
    out.emplace_back("manifest.json");
    return out;
  }

 private:
  struct Entry {
    std::string path;
    std::string sha256;
    std::size_t bytes;
  };
  fs::path root_;
  std::mutex mu_;
  std::vector<Entry> files_;
};

struct Context {
  const ExperimentConfig& cfg;
  ArtifactSink& sink;
  std::string hash;
  std::vector<TrialStatus> trials;  // one slot per trial, filled by its owner
};

HiddenSkillVector make_wstar(const ExperimentConfig& cfg, std::size_t d, std::uint64_t trial) {
  if (cfg.task.wstar == WstarKind::Ones) return HiddenSkillVector::ones(d);
  Rng rng(role_seed(cfg, "wstar", trial));
  return HiddenSkillVector::rademacher(d, rng);
}

std::vector<double> make_init(const ExperimentConfig& cfg, std::size_t d, std::uint64_t trial) {
  Rng rng(role_seed(cfg, "init", trial));
  return init_gaussian(d, cfg.task.r, rng).w;
}

double eta_for(const ExperimentConfig& cfg, const SkillDistribution& dist) {
  return cfg.task.eta ? *cfg.task.eta : default_eta(cfg.task.k, dist.l2_norm());
}

struct TrialOutput {
  std::vector<StepRecord> records;
  std::vector<double> batch_losses;  // SGD only, aligned with records
  std::vector<double> final_w;
  std::optional<std::uint64_t> diverged_at;
};

// Configured T, or the PL-rate horizon at this trial's init for "auto".
std::uint64_t steps_for(const ExperimentConfig& cfg, const SkillDistribution& dist, const HiddenSkillVector& wstar,
                        std::span<const double> w0) {
  const auto& t = cfg.task;
  if (!t.auto_steps) return t.steps;
  const auto s = population_stats(w0, wstar.values(), dist.weights());
  return default_horizon(eta_for(cfg, dist), t.k, dist.min_weight(), s.A, population_loss(s, t.k),
                         t.stop_loss.value_or(1e-8), t.steps_cap);
}

// Minibatch SGD; one row per logged post-update step 1..T.
TrialOutput sgd_trial(const ExperimentConfig& cfg, const SkillDistribution& dist, const HiddenSkillVector& wstar,
                      std::vector<double> w0, std::uint64_t trial, const RankBins* bins) {
  const auto& t = cfg.task;
  const double eta = eta_for(cfg, dist);
  const std::uint64_t steps = steps_for(cfg, dist, wstar, w0);
  ModelState state{std::move(w0), 0, t.r};
  Rng data(role_seed(cfg, "data", trial));
  TrialOutput out;
  for (std::uint64_t step = 1; step <= steps; ++step) {
    StepOutcome o;
    try {
      o = minibatch_step(state, dist, wstar, t.k, eta, t.batch_size, data);
    } catch (const DivergenceError& e) {
      out.diverged_at = e.step();
      break;
    }
    const bool last = step == steps;
    if (!last && t.log_every > 0 && step % t.log_every != 0 && !t.stop_loss) continue;
    auto rec = make_step_record(step, state.w, wstar.values(), dist.weights(), t.k, bins, &dist);
    const bool stop = t.stop_loss && rec.loss <= *t.stop_loss;
    if (last || stop || (t.log_every > 0 && step % t.log_every == 0)) {
      out.records.push_back(std::move(rec));
      out.batch_losses.push_back(o.batch_loss);
    }
    if (stop) break;
  }
  out.final_w = std::move(state.w);
  return out;
}

TrialOutput population_trial(const ExperimentConfig& cfg, const SkillDistribution& dist,
                             const HiddenSkillVector& wstar, const std::vector<double>& w0, const RankBins* bins,
                             std::uint64_t checkpoint_every = 0, std::vector<Checkpoint>* checkpoints = nullptr) {
  TrajectoryOptions opt;
  opt.max_steps = steps_for(cfg, dist, wstar, w0);
  opt.log_every = cfg.task.log_every;
  opt.stop_loss = cfg.task.stop_loss;
  opt.bins = bins;
  opt.dist = &dist;
  opt.checkpoint_every = checkpoint_every;
  auto log = population_gd_trajectory(w0, wstar.values(), dist.weights(), cfg.task.k, eta_for(cfg, dist), opt);
  if (checkpoints) *checkpoints = std::move(log.checkpoints);
  return {std::move(log.records), {}, std::move(log.final_w), log.diverged_at};
}

void note_divergence(TrialStatus& st, const TrialOutput& out) {
  if (out.diverged_at) {
    st.diverged = true;
    st.note = "diverged at step " + std::to_string(*out.diverged_at);
  }
}

std::string stage_report_text(const StageReport& rep) {
  auto opt = [](const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string("none"); };
  KeyValueReport kv;
  kv.add("stage1_exit_step", opt(rep.stage1_exit_step));
  kv.add("stage2_entry_step", opt(rep.stage2_entry_step));
  for (std::size_t b = 0; b < rep.bin_halving_step.size(); ++b)
    kv.add("bin" + std::to_string(b + 1) + "_halving_step", opt(rep.bin_halving_step[b]));
  return kv.str();
}

void run_single(Context& ctx, bool sgd) {
  const auto& cfg = ctx.cfg;
  ctx.trials.resize(1);
  ctx.trials[0].name = sgd ? "minimal-run" : "population-run";
  const auto dist = SkillDistribution::make(cfg.distribution);
  const RankBins bins(cfg.task.d, cfg.num_bins);
  const auto wstar = make_wstar(cfg, cfg.task.d, 0);
  auto w0 = make_init(cfg, cfg.task.d, 0);
  const auto out = sgd ? sgd_trial(cfg, dist, wstar, std::move(w0), 0, &bins)
                       : population_trial(cfg, dist, wstar, w0, &bins);
  note_divergence(ctx.trials[0], out);
  ctx.sink.write("trajectory.csv", trajectory_csv(out.records, ctx.hash, out.batch_losses));
  if (!sgd) ctx.sink.write("stages.txt", stage_report_text(detect_stages(out.records)));
}

std::string alpha_tag(double a) {
  std::string s = format_double(a);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

void run_sweep(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& sw = cfg.sweep;
  const std::size_t n = sw.alphas.size() * sw.num_seeds;
  ctx.trials.resize(n);
  struct Row {
    std::optional<std::uint64_t> steps_to_threshold;
    double final_loss = 0.0;
    double final_recovery = 0.0;
  };
  std::vector<Row> rows(n);
  const RankBins bins(cfg.task.d, cfg.num_bins);
  run_work_queue(n, cfg.parallelism, [&](std::size_t i) {
    const double alpha = sw.alphas[i / sw.num_seeds];
    const std::uint64_t seed = i % sw.num_seeds;
    DistributionSpec spec = cfg.distribution;
    if (spec.kind == DistributionKind::Uniform) spec.kind = DistributionKind::Zipf;
    spec.alpha = alpha;
    const auto dist = SkillDistribution::make(spec);
    const auto wstar = make_wstar(cfg, cfg.task.d, seed);
    auto w0 = make_init(cfg, cfg.task.d, seed);
    const auto out = sw.sgd ? sgd_trial(cfg, dist, wstar, std::move(w0), seed, &bins)
                            : population_trial(cfg, dist, wstar, w0, &bins);
    const std::string name = "alpha_" + alpha_tag(alpha) + "_seed_" + std::to_string(seed);
    ctx.trials[i].name = name;
    note_divergence(ctx.trials[i], out);
    ctx.sink.write(fs::path("trajectories") / (name + ".csv"), trajectory_csv(out.records, ctx.hash, out.batch_losses));
    Row& row = rows[i];
    for (const auto& r : out.records)
      if (r.loss <= sw.threshold) {
        row.steps_to_threshold = r.step;
        break;
      }
    if (!out.records.empty()) {
      row.final_loss = out.records.back().loss;
      row.final_recovery = out.records.back().recovery_error;
    }
    if (out.diverged_at) row.final_loss = std::numeric_limits<double>::quiet_NaN();
  });
  std::ostringstream s;
  s << "# schema=plcomp.sweep.v1 config_hash=" << ctx.hash << "\n";
  s << "alpha,seed,steps_to_threshold,final_loss,final_recovery_error\n";
  for (std::size_t i = 0; i < n; ++i) {
    s << format_double(sw.alphas[i / sw.num_seeds]) << ',' << i % sw.num_seeds << ','
      << (rows[i].steps_to_threshold ? std::to_string(*rows[i].steps_to_threshold) : std::string()) << ','
      << format_double(rows[i].final_loss) << ',' << format_double(rows[i].final_recovery) << '\n';
  }
  ctx.sink.write("summary.csv", s.str());
}

void run_separation(Context& ctx) {
  const auto& cfg = ctx.cfg;
  SeparationConfig sc;
  sc.d = cfg.task.d;
  sc.k = cfg.task.k;
  sc.alpha = cfg.distribution.alpha;
  sc.r = cfg.task.r;
  sc.batch_size = cfg.task.batch_size;
  sc.sample_budgets = cfg.separation.budgets;
  sc.num_seeds = cfg.separation.num_seeds;
  sc.root_seed = role_seed(cfg, "separation");
  sc.success_error = cfg.separation.success_error;
  sc.max_samples = cfg.separation.max_samples;
  sc.check_every_steps = cfg.separation.check_every;
  const auto res = separation_experiment(sc);
  ctx.trials.push_back({"separation", false, ""});

  std::ostringstream s;
  s << "# schema=plcomp.separation.v1 config_hash=" << ctx.hash << "\n";
  s << "arm,samples,median_recovery_error,median_population_loss\n";
  auto curve = [&](const char* arm, const std::vector<SeparationArmPoint>& pts) {
    for (const auto& p : pts)
      s << arm << ',' << p.budget << ',' << format_double(p.median_recovery_error) << ','
        << format_double(p.median_population_loss) << '\n';
  };
  curve("zipf", res.zipf_curve);
  curve("uniform", res.uniform_curve);
  ctx.sink.write("separation.csv", s.str());

  KeyValueReport kv;
  for (std::size_t i = 0; i < res.seeds.size(); ++i) {
    const auto& b = res.zipf_budget_to_success[i];
    kv.add("seed" + std::to_string(i) + "_zipf_samples_to_success", b ? std::to_string(*b) : std::string("none"));
    if (i < res.uniform_loss_at_success_budget.size())
      kv.add("seed" + std::to_string(i) + "_uniform_loss_at_budget", res.uniform_loss_at_success_budget[i]);
  }
  kv.add("median_success_budget",
         res.median_success_budget ? std::to_string(*res.median_success_budget) : std::string("none"));
  kv.add("median_uniform_loss_at_budget", res.median_uniform_loss_at_success_budget);
  kv.add("uniform_stalled", res.median_success_budget.has_value() &&
                                res.median_uniform_loss_at_success_budget >= 0.45);
  ctx.sink.write("separation.txt", kv.str());
}

void run_landscape(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& lp = cfg.landscape;
  const std::size_t d = cfg.task.d;
  const auto wstar = make_wstar(cfg, d, 0);
  const auto w0 = make_init(cfg, d, 0);
  std::vector<DistributionSpec> arms{cfg.distribution};
  std::vector<std::string> names{to_string(cfg.distribution.kind)};
  if (lp.compare_uniform && cfg.distribution.kind != DistributionKind::Uniform) {
    DistributionSpec u = cfg.distribution;
    u.kind = DistributionKind::Uniform;
    arms.push_back(u);
    names.push_back("uniform");
  }
  ctx.trials.resize(arms.size());
  std::vector<double> slopes(arms.size());
  run_work_queue(arms.size(), cfg.parallelism, [&](std::size_t a) {
    const auto dist = SkillDistribution::make(arms[a]);
    const auto every = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(
               std::llround(lp.checkpoint_fraction * static_cast<double>(steps_for(cfg, dist, wstar, w0)))));
    std::vector<Checkpoint> cps;
    const auto out = population_trial(cfg, dist, wstar, w0, nullptr, every, &cps);
    ctx.trials[a].name = names[a];
    note_divergence(ctx.trials[a], out);

    std::size_t used = std::max<std::size_t>(
        3, static_cast<std::size_t>(std::ceil(lp.pca_fraction * static_cast<double>(cps.size()))));
    used = std::min(used, cps.size());
    const auto diffs = checkpoint_diffs(std::span<const Checkpoint>(cps.data(), used));
    if (diffs.size() < 2) throw std::runtime_error("landscape: fewer than 2 checkpoint differences");
    const auto pca = pca_top2(diffs, role_seed(cfg, "pca"));
    const auto slice = landscape_slice(w0, pca.dir1, pca.dir2, lp.extent, lp.extent, lp.resolution,
                                       wstar.values(), dist.weights(), cfg.task.k);
    slopes[a] = max_slope_within(slice, lp.slope_radius, wstar.values(), dist.weights(), cfg.task.k);

    ctx.sink.write(names[a] + "_grid.csv", slice_grid_csv(slice));
    std::ostringstream proj;
    proj << "step,a,b,loss\n";
    const auto coords = project_onto_slice(slice, cps);
    for (std::size_t i = 0; i < cps.size(); ++i)
      proj << cps[i].step << ',' << format_double(coords[i].first) << ',' << format_double(coords[i].second) << ','
           << format_double(population_loss(cps[i].w, wstar.values(), dist.weights(), cfg.task.k)) << '\n';
    ctx.sink.write(names[a] + "_projection.csv", proj.str());

    auto join = [](const std::vector<double>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_double(v[i]);
      return s;
    };
    KeyValueReport kv;
    kv.add("distribution", names[a]);
    kv.add("extent1", slice.extent1);
    kv.add("extent2", slice.extent2);
    kv.add("resolution", static_cast<std::uint64_t>(slice.resolution));
    kv.add("explained1", pca.explained1);
    kv.add("explained2", pca.explained2);
    kv.add("dir2_degenerate", pca.dir2_degenerate);
    kv.add("checkpoints_used", static_cast<std::uint64_t>(used));
    kv.add("slope_radius", lp.slope_radius);
    kv.add("max_slope", slopes[a]);
    kv.add("center", join(slice.center));
    kv.add("dir1", join(slice.dir1));
    kv.add("dir2", join(slice.dir2));
    ctx.sink.write(names[a] + "_slice.txt", kv.str());
  });
  if (arms.size() == 2) {
    KeyValueReport kv;
    kv.add(names[0] + "_max_slope", slopes[0]);
    kv.add("uniform_max_slope", slopes[1]);
    kv.add("zipf_steeper", slopes[0] > slopes[1]);
    ctx.sink.write("slope_comparison.txt", kv.str());
  }
}

void run_probes(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& pp = cfg.probes;
  const std::size_t d = cfg.task.d;
  const std::size_t k = cfg.task.k;
  const auto dist = SkillDistribution::make(cfg.distribution);
  ctx.trials.resize(pp.probes.size());
  run_work_queue(pp.probes.size(), cfg.parallelism, [&](std::size_t i) {
    const std::string& name = pp.probes[i];
    ctx.trials[i].name = name;
    KeyValueReport kv;
    const auto wstar = make_wstar(cfg, d, 0);
    Rng rng(role_seed(cfg, "probe_" + name));
    if (name == "pl") {
      const auto out = population_trial(cfg, dist, wstar, make_init(cfg, d, 0), nullptr);
      note_divergence(ctx.trials[i], out);
      const auto pl = check_pl_inequality(out.records, dist.min_weight(), k);
      kv.add("records", static_cast<std::uint64_t>(out.records.size()));
      kv.add("evaluated", static_cast<std::uint64_t>(pl.evaluated));
      kv.add("skipped", static_cast<std::uint64_t>(pl.skipped));
      kv.add("min_ratio", pl.min_ratio);
      kv.add("final_loss", out.records.empty() ? 0.0 : out.records.back().loss);
      // The inequality is only claimed from a nice init: |A(0)| > B(0), k even.
      const bool asserted =
          !out.records.empty() && k % 2 == 0 && std::abs(out.records.front().A) > out.records.front().B;
      kv.add("ratio_bound_held", pl.passed);
      kv.add("asserted", asserted);
      kv.add("passed", !asserted || pl.passed);
    } else if (name == "stationary") {
      const auto rep = check_stationary_points(wstar, dist.weights(), k, pp.stationary_probes, rng);
      kv.add("grad_norm_origin", rep.grad_norm_origin);
      kv.add("grad_norm_plus", rep.grad_norm_plus);
      kv.add("grad_norm_minus", rep.grad_norm_minus);
      kv.add("probes", static_cast<std::uint64_t>(rep.num_probes));
      kv.add("min_probe_grad_norm", rep.min_probe_grad_norm);
      kv.add("passed", rep.passed);
    } else if (name == "init") {
      const auto rep = check_init_concentration(d, cfg.task.r, dist.weights(), pp.init_trials, rng);
      Rng urng(role_seed(cfg, "probe_init_uniform"));
      const auto unif = uniform_weights(d);
      const auto urep = check_init_concentration(d, cfg.task.r, unif, pp.init_trials, urng);
      double ul2 = 0.0;
      for (double v : unif) ul2 += v * v;
      kv.add("trials", static_cast<std::uint64_t>(rep.trials));
      kv.add("median_abs_a", rep.median_abs_a);
      kv.add("uniform_median_abs_a", urep.median_abs_a);
      kv.add("median_ratio", rep.median_abs_a / urep.median_abs_a);
      kv.add("l2_ratio", dist.l2_norm() / std::sqrt(ul2));
      kv.add("a_bracket_fraction", rep.a_bracket_fraction);
      kv.add("b_bracket_fraction", rep.b_bracket_fraction);
      kv.add("passed", rep.passed);
    } else if (name == "noise") {
      const auto w0 = make_init(cfg, d, 0);
      const auto rep = estimate_gradient_noise(w0, wstar, dist, k, cfg.task.batch_size, pp.noise_batches, rng);
      kv.add("batch_size", static_cast<std::uint64_t>(rep.batch_size));
      kv.add("batches", static_cast<std::uint64_t>(rep.num_batches));
      kv.add("mean_noise_norm", rep.mean_noise_norm);
      kv.add("population_grad_norm", rep.population_grad_norm);
      kv.add("ratio", rep.ratio);
      kv.add("violation_fraction", rep.violation_fraction);
    } else if (name == "csq") {
      CsqPackingConfig cc;
      cc.d = pp.csq_d;
      cc.epsilon = pp.csq_epsilon;
      cc.num_vectors = pp.csq_vectors;
      cc.k = k;
      cc.seed = role_seed(cfg, "probe_csq");
      const auto rep = csq_packing(cc);
      kv.add("d", static_cast<std::uint64_t>(cc.d));
      kv.add("vectors", static_cast<std::uint64_t>(cc.num_vectors));
      kv.add("epsilon", cc.epsilon);
      kv.add("hoeffding_bound_delta_0.001", hoeffding_overlap_bound(cc.d, cc.num_vectors, 0.001));
      kv.add("max_overlap", rep.max_overlap);
      kv.add("max_correlation", rep.max_correlation);
      kv.add("packing_budget", rep.packing_budget);
      kv.add("within_budget", rep.within_budget);
      kv.add("passed", rep.passed);
    }
    ctx.sink.write("probe_" + name + ".txt", kv.str());
  });
}

void run_gen_data(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& g = cfg.generate;
  ctx.trials.push_back({"gen-data", false, ""});
  const auto dist = SkillDistribution::make(cfg.distribution);
  const std::uint64_t seed = role_seed(cfg, "data");
  Rng rng(seed);
  std::vector<std::uint64_t> hist(dist.size(), 0);
  std::string lines;
  std::string task;
  auto count = [&](const std::vector<std::size_t>& skills) {
    for (auto s : skills) ++hist.at(s);
  };

  switch (g.task) {
    case GenTask::Arithmetic: {
      task = "arithmetic";
      ArithmeticOptions opt{g.num_ops, g.operand_min, g.operand_max};
      for (const auto& r : gen_arithmetic(opt, dist, g.n, rng)) {
        count(r.skills);
        lines += to_json_line(r) + "\n";
      }
      break;
    }
    case GenTask::StateTracking: {
      task = "state_tracking";
      std::optional<HopMixture> hops;
      if (!g.hop_mixture.empty()) hops = HopMixture{g.hop_mixture};
      for (const auto& r : gen_state_tracking(g.k, dist, g.n, rng, hops)) {
        count(r.skills);
        lines += to_json_line(r) + "\n";
      }
      break;
    }
    case GenTask::MultiHop: {
      task = "multihop_qa";
      Rng graph_rng(role_seed(cfg, "graph"));
      const auto graph = gen_relation_graph(g.num_entities, g.num_relations, graph_rng, g.self_loops);
      QaOptions opt{g.emit_facts, g.fact_ratio};
      for (const auto& r : gen_multihop_qa(graph, g.k, dist, g.n, rng, opt)) {
        count(r.relations);
        lines += to_json_line(r, graph) + "\n";
      }
      break;
    }
    case GenTask::Gsm: {
      task = "gsm";
      GsmOptions opt;
      opt.min_ops = g.min_ops;
      opt.max_ops = g.max_ops;
      opt.modulus = g.modulus;
      opt.multi_hop_template = g.multi_hop_template;
      if (gsm_skill_count(opt, g.max_leaf) != dist.size())
        throw std::invalid_argument("gen-data: distribution size does not match the GSM value range");
      for (const auto& p : gen_gsm(opt, dist, g.n, rng, &hist)) lines += to_json_line(p) + "\n";
      break;
    }
  }
  ctx.sink.write("data.jsonl", lines);

  ordered_json m;
  m["task"] = task;
  m["config_hash"] = ctx.hash;
  m["seed"] = seed;
  m["records"] = g.n;
  m["skill_weights"] = dist.weights();
  m["realized_histogram"] = hist;
  ctx.sink.write("data_manifest.json", m.dump(2) + "\n");
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
  if (auto problems = validate(config); !problems.empty()) throw ConfigError(std::move(problems));
  RunResult result;
  result.out_dir = config.output;
  result.warnings = config_warnings(config);
  fs::create_directories(result.out_dir);

  ArtifactSink sink(result.out_dir);
  Context ctx{config, sink, config_hash(config), {}};
  sink.write("config.json", canonical_json(config) + "\n");

  switch (config.kind) {
    case ExperimentKind::MinimalRun:
      run_single(ctx, true);
      break;
    case ExperimentKind::PopulationRun:
      run_single(ctx, false);
      break;
    case ExperimentKind::SweepAlpha:
      run_sweep(ctx);
      break;
    case ExperimentKind::Separation:
      run_separation(ctx);
      break;
    case ExperimentKind::Landscape:
      run_landscape(ctx);
      break;
    case ExperimentKind::Probes:
      run_probes(ctx);
      break;
    case ExperimentKind::GenData:
      run_gen_data(ctx);
      break;
  }

  for (const auto& t : ctx.trials) result.diverged += t.diverged ? 1 : 0;
  result.trials = ctx.trials;
  result.artifacts = sink.finish(config, ctx.trials, result.diverged);
  result.exit_status = result.diverged > 0 ? 2 : 0;
  return result;
}

}  // namespace plcomp
