#include "plcomp/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "plcomp/csv.hpp"

namespace plcomp {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct Kinds {
  ExperimentKind kind;
  const char* name;
};

constexpr Kinds kKinds[] = {
    {ExperimentKind::MinimalRun, "minimal-run"},   {ExperimentKind::PopulationRun, "population-run"},
    {ExperimentKind::SweepAlpha, "sweep-alpha"},   {ExperimentKind::Separation, "separation"},
    {ExperimentKind::Landscape, "landscape"},      {ExperimentKind::Probes, "probes"},
    {ExperimentKind::GenData, "gen-data"},
};

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += v[i];
  }
  return s;
}

// Walks one JSON object, remembering which keys were consumed so leftovers can
// be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path, std::vector<std::string>& errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (!obj_.is_object()) errors_.push_back(path_ + ": expected an object");
  }

  ~ObjectReader() {
    if (!obj_.is_object()) return;
    for (const auto& [key, _] : obj_.items())
      if (!seen_.count(key)) errors_.push_back(path_ + "." + key + ": unknown key");
  }

  bool has(const std::string& key) {
    if (!obj_.is_object() || !obj_.contains(key)) return false;
    seen_.insert(key);
    return true;
  }

  void forget(const std::string& key) { seen_.erase(key); }

  const json& at(const std::string& key) const { return obj_.at(key); }
  std::string path(const std::string& key) const { return path_ + "." + key; }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    const json& v = obj_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw std::invalid_argument("expected a number");
        out = v.get<double>();
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::invalid_argument("expected true/false");
        out = v.get<bool>();
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0 &&
            std::is_unsigned_v<T>)
          throw std::invalid_argument("expected a non-negative integer");
        out = v.get<T>();
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::invalid_argument("expected a string");
        out = v.get<std::string>();
      } else {
        out = v.get<T>();
      }
    } catch (const std::exception& e) {
      errors_.push_back(path(key) + ": " + e.what());
    }
  }

  template <class T>
  void get_optional(const std::string& key, std::optional<T>& out) {
    if (!has(key)) return;
    if (obj_.at(key).is_null()) {
      out.reset();
      return;
    }
    T tmp{};
    seen_.erase(key);
    get(key, tmp);
    out = tmp;
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

void parse_distribution(const json& j, DistributionSpec& spec, bool& has_d,
                        std::vector<std::string>& errors) {
  ObjectReader r(j, "distribution", errors);
  std::string kind = to_string(spec.kind);
  r.get("kind", kind);
  if (kind == "uniform")
    spec.kind = DistributionKind::Uniform;
  else if (kind == "zipf")
    spec.kind = DistributionKind::Zipf;
  else if (kind == "binned_zipf")
    spec.kind = DistributionKind::BinnedZipf;
  else
    errors.push_back("distribution.kind: expected uniform|zipf|binned_zipf, got '" + kind + "'");
  has_d = r.has("d");
  if (has_d) {
    const json& d = r.at("d");
    if (d.is_number_unsigned())
      spec.d = d.get<std::size_t>();
    else
      errors.push_back("distribution.d: expected a positive integer");
  }
  r.get("alpha", spec.alpha);
  r.get("m", spec.m);
  if (r.has("ordering")) {
    const json& o = r.at("ordering");
    if (o.is_string() && o.get<std::string>() == "identity") {
      spec.ordering = Ordering::identity();
    } else if (o.is_string() && o.get<std::string>() == "reversed") {
      spec.ordering = Ordering::reversed();
    } else if (o.is_object() && o.size() == 1 && o.contains("random") && o["random"].is_number_unsigned()) {
      spec.ordering = Ordering::random(o["random"].get<std::uint64_t>());
    } else {
      errors.push_back("distribution.ordering: expected \"identity\", \"reversed\" or {\"random\": seed}");
    }
  }
}

std::size_t generated_skill_count(const GenerateParams& g) {
  switch (g.task) {
    case GenTask::Arithmetic:
      return g.operand_max >= g.operand_min ? static_cast<std::size_t>(g.operand_max - g.operand_min + 1) : 0;
    case GenTask::StateTracking:
      return 120;
    case GenTask::MultiHop:
      return g.num_relations;
    case GenTask::Gsm:
      return g.modulus ? static_cast<std::size_t>(std::max<std::int64_t>(*g.modulus, 0))
                       : static_cast<std::size_t>(std::max<std::int64_t>(g.max_leaf + 1, 0));
  }
  return 0;
}

const char* gen_task_name(GenTask t) {
  switch (t) {
    case GenTask::Arithmetic:
      return "arithmetic";
    case GenTask::StateTracking:
      return "state_tracking";
    case GenTask::MultiHop:
      return "multihop_qa";
    case GenTask::Gsm:
      return "gsm";
  }
  return "?";
}

ordered_json ordering_json(const Ordering& o) {
  switch (o.kind) {
    case Ordering::Kind::Identity:
      return "identity";
    case Ordering::Kind::Reversed:
      return "reversed";
    case Ordering::Kind::Random:
      return ordered_json{{"random", o.seed}};
  }
  return nullptr;
}

template <class T>
ordered_json opt_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k.name;
  return "?";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) {
  for (const auto& k : kKinds)
    if (name == k.name) return k.kind;
  return std::nullopt;
}

const std::vector<std::string>& experiment_kind_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& k : kKinds) v.emplace_back(k.name);
    return v;
  }();
  return names;
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid config:\n  " + join(problems, "\n  ")), problems_(std::move(problems)) {}

ExperimentConfig parse_config(std::string_view json_text, std::optional<ExperimentKind> kind_hint) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("not valid JSON: ") + e.what()});
  }
  ExperimentConfig cfg;
  if (kind_hint) cfg.kind = *kind_hint;
  std::vector<std::string> errors;
  bool dist_has_d = false;
  {
    ObjectReader r(root, "config", errors);
    if (r.has("experiment")) {
      const json& e = r.at("experiment");
      const auto kind = e.is_string() ? parse_experiment_kind(e.get<std::string>()) : std::nullopt;
      if (kind && kind_hint && *kind != *kind_hint)
        errors.push_back("config.experiment: '" + to_string(*kind) + "' does not match the requested '" +
                         to_string(*kind_hint) + "'");
      else if (kind)
        cfg.kind = *kind;
      else
        errors.push_back("config.experiment: expected one of " + join(experiment_kind_names(), ", "));
    }
    r.get("output", cfg.output);
    r.get("parallelism", cfg.parallelism);
    const bool has_bins = r.has("num_bins");
    if (has_bins) {
      r.forget("num_bins");
      r.get("num_bins", cfg.num_bins);
    }

    if (r.has("task")) {
      ObjectReader t(r.at("task"), "task", errors);
      t.get("d", cfg.task.d);
      t.get("k", cfg.task.k);
      t.get("r", cfg.task.r);
      t.get_optional("eta", cfg.task.eta);
      t.get("batch_size", cfg.task.batch_size);
      if (t.has("steps") && t.at("steps").is_string()) {
        if (t.at("steps").get<std::string>() == "auto")
          cfg.task.auto_steps = true;
        else
          errors.push_back("task.steps: expected an integer or \"auto\"");
      } else {
        t.forget("steps");
        t.get("steps", cfg.task.steps);
      }
      t.get("steps_cap", cfg.task.steps_cap);
      t.get("log_every", cfg.task.log_every);
      t.get_optional("stop_loss", cfg.task.stop_loss);
      std::string wstar = "rademacher";
      t.get("wstar", wstar);
      if (wstar == "rademacher")
        cfg.task.wstar = WstarKind::Rademacher;
      else if (wstar == "ones")
        cfg.task.wstar = WstarKind::Ones;
      else
        errors.push_back("task.wstar: expected rademacher|ones");
    }
    if (!has_bins) cfg.num_bins = std::min<std::size_t>(cfg.num_bins, std::max<std::size_t>(cfg.task.d, 1));
    cfg.distribution.d = cfg.task.d;
    cfg.distribution.m = cfg.task.d;
    if (r.has("distribution")) parse_distribution(r.at("distribution"), cfg.distribution, dist_has_d, errors);

    if (r.has("seeds")) {
      ObjectReader s(r.at("seeds"), "seeds", errors);
      s.get("root", cfg.seeds.root);
      s.get_optional("wstar", cfg.seeds.wstar);
      s.get_optional("init", cfg.seeds.init);
      s.get_optional("data", cfg.seeds.data);
    }
    if (r.has("sweep")) {
      ObjectReader s(r.at("sweep"), "sweep", errors);
      s.get("alphas", cfg.sweep.alphas);
      s.get("num_seeds", cfg.sweep.num_seeds);
      s.get("threshold", cfg.sweep.threshold);
      std::string dyn = cfg.sweep.sgd ? "sgd" : "population";
      s.get("dynamics", dyn);
      if (dyn == "sgd" || dyn == "population")
        cfg.sweep.sgd = dyn == "sgd";
      else
        errors.push_back("sweep.dynamics: expected population|sgd");
    }
    if (r.has("separation")) {
      ObjectReader s(r.at("separation"), "separation", errors);
      s.get("budgets", cfg.separation.budgets);
      s.get("num_seeds", cfg.separation.num_seeds);
      s.get("success_error", cfg.separation.success_error);
      s.get("max_samples", cfg.separation.max_samples);
      s.get("check_every", cfg.separation.check_every);
    }
    if (r.has("landscape")) {
      ObjectReader s(r.at("landscape"), "landscape", errors);
      s.get("extent", cfg.landscape.extent);
      s.get("resolution", cfg.landscape.resolution);
      s.get("slope_radius", cfg.landscape.slope_radius);
      s.get("checkpoint_fraction", cfg.landscape.checkpoint_fraction);
      s.get("pca_fraction", cfg.landscape.pca_fraction);
      s.get("compare_uniform", cfg.landscape.compare_uniform);
    }
    if (r.has("probes")) {
      ObjectReader s(r.at("probes"), "probes", errors);
      s.get("run", cfg.probes.probes);
      s.get("stationary_probes", cfg.probes.stationary_probes);
      s.get("init_trials", cfg.probes.init_trials);
      s.get("noise_batches", cfg.probes.noise_batches);
      s.get("csq_d", cfg.probes.csq_d);
      s.get("csq_vectors", cfg.probes.csq_vectors);
      s.get("csq_epsilon", cfg.probes.csq_epsilon);
    }
    if (r.has("generate")) {
      auto& g = cfg.generate;
      ObjectReader s(r.at("generate"), "generate", errors);
      std::string task = gen_task_name(g.task);
      s.get("task", task);
      if (task == "arithmetic")
        g.task = GenTask::Arithmetic;
      else if (task == "state_tracking")
        g.task = GenTask::StateTracking;
      else if (task == "multihop_qa")
        g.task = GenTask::MultiHop;
      else if (task == "gsm")
        g.task = GenTask::Gsm;
      else
        errors.push_back("generate.task: expected arithmetic|state_tracking|multihop_qa|gsm");
      s.get("n", g.n);
      s.get("k", g.k);
      s.get("hop_mixture", g.hop_mixture);
      s.get("num_ops", g.num_ops);
      s.get("operand_min", g.operand_min);
      s.get("operand_max", g.operand_max);
      s.get("num_entities", g.num_entities);
      s.get("num_relations", g.num_relations);
      s.get("self_loops", g.self_loops);
      s.get("emit_facts", g.emit_facts);
      s.get("fact_ratio", g.fact_ratio);
      s.get("min_ops", g.min_ops);
      s.get("max_ops", g.max_ops);
      s.get_optional("modulus", g.modulus);
      s.get("max_leaf", g.max_leaf);
      s.get("multi_hop_template", g.multi_hop_template);
    }
  }

  // The generator fixes the skill count; the task section fixes it otherwise.
  const std::size_t expected_d =
      cfg.kind == ExperimentKind::GenData ? generated_skill_count(cfg.generate) : cfg.task.d;
  if (dist_has_d && cfg.distribution.d != expected_d)
    errors.push_back("distribution.d: must equal " + std::to_string(expected_d) + " for this experiment");
  cfg.distribution.d = expected_d;
  if (cfg.distribution.kind != DistributionKind::BinnedZipf) cfg.distribution.m = expected_d;

  for (auto& e : validate(cfg))
    if (std::find(errors.begin(), errors.end(), e) == errors.end()) errors.push_back(std::move(e));
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> kind) {
  return parse_config(read_text_file(path), kind);
}

std::vector<std::string> validate(const ExperimentConfig& c) {
  std::vector<std::string> e;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) e.push_back(msg);
  };
  need(c.task.d >= 1, "task.d: must be >= 1");
  need(c.task.k >= 1 && c.task.k <= 16, "task.k: must be in 1..16");
  need(c.task.r > 0.0 && std::isfinite(c.task.r), "task.r: must be > 0");
  need(!c.task.eta || (*c.task.eta > 0.0 && std::isfinite(*c.task.eta)), "task.eta: must be > 0");
  need(c.task.batch_size >= 1, "task.batch_size: must be >= 1");
  need(c.task.steps >= 1, "task.steps: must be >= 1");
  need(c.task.steps_cap >= 1, "task.steps_cap: must be >= 1");
  need(c.parallelism >= 1, "parallelism: must be >= 1");
  need(!c.output.empty(), "output: must not be empty");
  const auto& dist = c.distribution;
  need(dist.d >= 1, "distribution.d: must be >= 1");
  if (dist.kind != DistributionKind::Uniform)
    need(dist.alpha > 0.0 && std::isfinite(dist.alpha), "distribution.alpha: must be > 0");
  if (dist.kind == DistributionKind::BinnedZipf)
    need(dist.m >= 1 && dist.m <= dist.d, "distribution.m: must satisfy 1 <= m <= d");
  need(c.num_bins >= 1 && c.num_bins <= c.task.d, "num_bins: must satisfy 1 <= num_bins <= task.d");

  switch (c.kind) {
    case ExperimentKind::SweepAlpha:
      need(!c.sweep.alphas.empty(), "sweep.alphas: must be non-empty");
      for (double a : c.sweep.alphas) need(a > 0.0 && std::isfinite(a), "sweep.alphas: entries must be > 0");
      need(c.sweep.num_seeds >= 1, "sweep.num_seeds: must be >= 1");
      break;
    case ExperimentKind::Separation:
      need(c.separation.num_seeds >= 1, "separation.num_seeds: must be >= 1");
      need(c.separation.check_every >= 1, "separation.check_every: must be >= 1");
      need(dist.kind == DistributionKind::Zipf, "separation: distribution.kind must be zipf (the Zipf arm)");
      break;
    case ExperimentKind::Landscape:
      need(c.landscape.extent > 0.0, "landscape.extent: must be > 0");
      need(c.landscape.resolution >= 3, "landscape.resolution: must be >= 3");
      need(c.landscape.checkpoint_fraction > 0.0 && c.landscape.checkpoint_fraction <= 0.5,
           "landscape.checkpoint_fraction: must be in (0, 0.5]");
      need(c.landscape.pca_fraction > 0.0 && c.landscape.pca_fraction <= 1.0,
           "landscape.pca_fraction: must be in (0, 1]");
      need(c.task.d >= 2, "landscape: task.d must be >= 2");
      break;
    case ExperimentKind::Probes: {
      static const std::set<std::string> known{"pl", "stationary", "init", "noise", "csq"};
      for (const auto& p : c.probes.probes) need(known.count(p) == 1, "probes.run: unknown probe '" + p + "'");
      need(c.probes.init_trials >= 1000, "probes.init_trials: must be >= 1000");
      need(c.probes.noise_batches >= 100, "probes.noise_batches: must be >= 100");
      need(c.probes.csq_epsilon > 0.0 && c.probes.csq_epsilon <= 1.0, "probes.csq_epsilon: must be in (0, 1]");
      need(c.probes.csq_vectors >= 2, "probes.csq_vectors: must be >= 2");
      break;
    }
    case ExperimentKind::GenData: {
      const auto& g = c.generate;
      need(g.n >= 1, "generate.n: must be >= 1");
      if (g.task == GenTask::Arithmetic) {
        need(g.operand_max >= g.operand_min, "generate.operand_max: must be >= operand_min");
        need(g.num_ops >= 1, "generate.num_ops: must be >= 1");
      }
      if (g.task == GenTask::StateTracking || g.task == GenTask::MultiHop)
        need(g.k >= 1 || !g.hop_mixture.empty(), "generate.k: must be >= 1");
      if (g.task == GenTask::MultiHop) {
        need(g.num_entities >= 2, "generate.num_entities: must be >= 2");
        need(g.num_relations >= 1, "generate.num_relations: must be >= 1");
        need(g.fact_ratio >= 0.0 && g.fact_ratio <= 1.0, "generate.fact_ratio: must be in [0, 1]");
      }
      if (g.task == GenTask::Gsm) {
        need(g.min_ops >= 2 && g.max_ops <= 8 && g.min_ops <= g.max_ops,
             "generate.min_ops/max_ops: must satisfy 2 <= min_ops <= max_ops <= 8");
        need(!g.modulus || *g.modulus >= 2, "generate.modulus: must be a prime >= 2");
        need(g.modulus || g.max_leaf >= 1, "generate.max_leaf: must be >= 1");
      }
      break;
    }
    default:
      break;
  }
  return e;
}

std::string canonical_json(const ExperimentConfig& c) {
  ordered_json j;
  j["experiment"] = to_string(c.kind);
  j["num_bins"] = c.num_bins;
  j["task"] = {{"d", c.task.d},
               {"k", c.task.k},
               {"r", c.task.r},
               {"eta", opt_json(c.task.eta)},
               {"batch_size", c.task.batch_size},
               {"steps", c.task.auto_steps ? ordered_json("auto") : ordered_json(c.task.steps)},
               {"steps_cap", c.task.steps_cap},
               {"log_every", c.task.log_every},
               {"stop_loss", opt_json(c.task.stop_loss)},
               {"wstar", c.task.wstar == WstarKind::Ones ? "ones" : "rademacher"}};
  j["distribution"] = {{"kind", to_string(c.distribution.kind)},
                       {"d", c.distribution.d},
                       {"alpha", c.distribution.alpha},
                       {"m", c.distribution.m},
                       {"ordering", ordering_json(c.distribution.ordering)}};
  j["seeds"] = {{"root", c.seeds.root},
                {"wstar", opt_json(c.seeds.wstar)},
                {"init", opt_json(c.seeds.init)},
                {"data", opt_json(c.seeds.data)}};
  j["sweep"] = {{"alphas", c.sweep.alphas},
                {"num_seeds", c.sweep.num_seeds},
                {"threshold", c.sweep.threshold},
                {"dynamics", c.sweep.sgd ? "sgd" : "population"}};
  j["separation"] = {{"budgets", c.separation.budgets},
                     {"num_seeds", c.separation.num_seeds},
                     {"success_error", c.separation.success_error},
                     {"max_samples", c.separation.max_samples},
                     {"check_every", c.separation.check_every}};
  j["landscape"] = {{"extent", c.landscape.extent},
                    {"resolution", c.landscape.resolution},
                    {"slope_radius", c.landscape.slope_radius},
                    {"checkpoint_fraction", c.landscape.checkpoint_fraction},
                    {"pca_fraction", c.landscape.pca_fraction},
                    {"compare_uniform", c.landscape.compare_uniform}};
  j["probes"] = {{"run", c.probes.probes},
                 {"stationary_probes", c.probes.stationary_probes},
                 {"init_trials", c.probes.init_trials},
                 {"noise_batches", c.probes.noise_batches},
                 {"csq_d", c.probes.csq_d},
                 {"csq_vectors", c.probes.csq_vectors},
                 {"csq_epsilon", c.probes.csq_epsilon}};
  const auto& g = c.generate;
  j["generate"] = {{"task", gen_task_name(g.task)},
                   {"n", g.n},
                   {"k", g.k},
                   {"hop_mixture", g.hop_mixture},
                   {"num_ops", g.num_ops},
                   {"operand_min", g.operand_min},
                   {"operand_max", g.operand_max},
                   {"num_entities", g.num_entities},
                   {"num_relations", g.num_relations},
                   {"self_loops", g.self_loops},
                   {"emit_facts", g.emit_facts},
                   {"fact_ratio", g.fact_ratio},
                   {"min_ops", g.min_ops},
                   {"max_ops", g.max_ops},
                   {"modulus", opt_json(g.modulus)},
                   {"max_leaf", g.max_leaf},
                   {"multi_hop_template", g.multi_hop_template}};
  return j.dump(2);
}

std::string config_hash(const ExperimentConfig& config) { return sha256_hex(canonical_json(config)); }

std::uint64_t role_seed(const ExperimentConfig& config, std::string_view role, std::uint64_t trial) {
  std::uint64_t base = config.seeds.root;
  if (role == "wstar" && config.seeds.wstar) base = *config.seeds.wstar;
  if (role == "init" && config.seeds.init) base = *config.seeds.init;
  if (role == "data" && config.seeds.data) base = *config.seeds.data;
  return derive_seed(base, role, trial);
}

}  // namespace plcomp
