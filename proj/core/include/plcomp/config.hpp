#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "plcomp/distributions.hpp"

namespace plcomp {

enum class ExperimentKind { MinimalRun, PopulationRun, SweepAlpha, Separation, Landscape, Probes, GenData };

std::string to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);
const std::vector<std::string>& experiment_kind_names();

enum class WstarKind { Rademacher, Ones };

struct TaskParams {
  std::size_t d = 50;
  std::size_t k = 4;
  double r = 0.1;
  std::optional<double> eta;  // default 1/(20 k^2 ||p||_2)
  std::size_t batch_size = 8;
  std::uint64_t steps = 1000;
  bool auto_steps = false;              // "steps": "auto" -> default_horizon at the init
  std::uint64_t steps_cap = 10'000'000;  // upper bound for auto steps
  std::uint64_t log_every = 1;
  std::optional<double> stop_loss;
  WstarKind wstar = WstarKind::Rademacher;
};

struct SeedParams {
  std::uint64_t root = 0;
  std::optional<std::uint64_t> wstar;
  std::optional<std::uint64_t> init;
  std::optional<std::uint64_t> data;
};

struct SweepParams {
  std::vector<double> alphas{0.5, 0.75, 1.0, 1.25, 1.5};
  std::size_t num_seeds = 3;
  double threshold = 1e-6;
  bool sgd = false;  // population dynamics unless set
};

struct SeparationParams {
  std::vector<std::uint64_t> budgets{100000, 1000000, 3000000};
  std::size_t num_seeds = 5;
  double success_error = 0.1;
  std::uint64_t max_samples = 50'000'000;
  std::uint64_t check_every = 100;
};

struct LandscapeParams {
  double extent = 0.5;
  std::size_t resolution = 41;
  double slope_radius = 0.05;
  double checkpoint_fraction = 0.01;
  double pca_fraction = 1.0;  // leading fraction of checkpoints used for PCA
  bool compare_uniform = true;
};

struct ProbeParams {
  std::vector<std::string> probes{"pl", "stationary", "init", "noise", "csq"};
  std::size_t stationary_probes = 1000;
  std::size_t init_trials = 1000;
  std::size_t noise_batches = 200;
  std::size_t csq_d = 400;
  std::size_t csq_vectors = 100;
  double csq_epsilon = 0.31;
};

enum class GenTask { Arithmetic, StateTracking, MultiHop, Gsm };

struct GenerateParams {
  GenTask task = GenTask::Arithmetic;
  std::size_t n = 1000;
  std::size_t k = 4;                  // hops (state tracking, multi-hop)
  std::vector<double> hop_mixture;    // state tracking: weights for k = 1..len
  std::size_t num_ops = 4;            // arithmetic
  std::int64_t operand_min = 1;
  std::int64_t operand_max = 50;
  std::size_t num_entities = 50;
  std::size_t num_relations = 20;
  bool self_loops = true;
  bool emit_facts = false;
  double fact_ratio = 0.0;
  std::size_t min_ops = 2;            // gsm
  std::size_t max_ops = 8;
  std::optional<std::int64_t> modulus = 211;
  std::int64_t max_leaf = 200;
  bool multi_hop_template = false;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::MinimalRun;
  TaskParams task;
  DistributionSpec distribution;
  SeedParams seeds;
  std::size_t num_bins = 5;
  SweepParams sweep;
  SeparationParams separation;
  LandscapeParams landscape;
  ProbeParams probes;
  GenerateParams generate;
  std::string output = "out";
  std::size_t parallelism = 1;
};

/// Every violation found while parsing or validating, one message each.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Parses the JSON config format. Unknown keys and out-of-range values are
/// errors; all of them are collected before throwing ConfigError.
/// With `kind` set, a missing "experiment" key defaults to it and a
/// different one is an error.
ExperimentConfig parse_config(std::string_view json_text, std::optional<ExperimentKind> kind = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<ExperimentKind> kind = std::nullopt);

/// Range checks shared by the parser and programmatic callers.
std::vector<std::string> validate(const ExperimentConfig& config);

/// Canonical JSON with every experiment field spelled out; stable across runs.
/// `output` and `parallelism` are execution settings and are left out, so they
/// never change artifact bytes.
std::string canonical_json(const ExperimentConfig& config);
/// sha256 of canonical_json.
std::string config_hash(const ExperimentConfig& config);

/// Seed for a role, honoring explicit overrides for "wstar", "init", "data".
std::uint64_t role_seed(const ExperimentConfig& config, std::string_view role, std::uint64_t trial = 0);

}  // namespace plcomp
