// plcomp: command-line front end for the experiment runner.
//
//   plcomp <experiment> [--config file.json] [--out dir] [--parallelism n] [--seed root]
//
// PLCOMP_OUT_ROOT, when set, is prepended to relative output directories.
// Exit status: 0 on success, 2 when any trial diverged, 1 on errors.

#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "plcomp/config.hpp"
#include "plcomp/runner.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::size_t> parallelism;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

int run(plcomp::ExperimentKind kind, const Flags& flags) {
  using namespace plcomp;
  ExperimentConfig cfg = flags.config.empty() ? parse_config("{}", kind) : load_config(flags.config, kind);
  if (flags.out) cfg.output = *flags.out;
  if (flags.parallelism) cfg.parallelism = *flags.parallelism;
  if (flags.seed) cfg.seeds.root = *flags.seed;
  if (const char* root = std::getenv("PLCOMP_OUT_ROOT"); root && *root) {
    std::filesystem::path p(cfg.output);
    if (p.is_relative()) cfg.output = (std::filesystem::path(root) / p).string();
  }

  for (const auto& w : config_warnings(cfg)) std::cerr << "warning: " << w << "\n";
  const RunResult res = run_experiment(cfg);
  if (!flags.quiet) {
    for (const auto& a : res.artifacts) std::cout << (res.out_dir / a).string() << "\n";
  }
  for (const auto& t : res.trials)
    if (t.diverged) std::cerr << "trial " << t.name << ": " << t.note << "\n";
  if (res.diverged > 0)
    std::cerr << res.diverged << " of " << res.trials.size() << " trials diverged\n";
  return res.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skill-composition dynamics experiments"};
  app.require_subcommand(1);
  Flags flags;
  std::optional<plcomp::ExperimentKind> chosen;

  const std::pair<const char*, const char*> commands[] = {
      {"minimal-run", "minibatch SGD on the composition task"},
      {"population-run", "population gradient descent with stage report"},
      {"sweep-alpha", "trajectories over a grid of Zipf exponents"},
      {"separation", "Zipf vs uniform sample budgets"},
      {"landscape", "PCA loss-landscape slices"},
      {"probes", "PL, stationary point, init, noise and packing probes"},
      {"gen-data", "JSONL datasets for the composition tasks"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--parallelism", flags.parallelism, "maximum concurrent trials")->check(CLI::PositiveNumber);
    sub->add_option("--seed", flags.seed, "root seed");
    sub->add_flag("-q,--quiet", flags.quiet, "do not list artifacts");
    sub->callback([&chosen, n = std::string(name)] { chosen = plcomp::parse_experiment_kind(n); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    return run(*chosen, flags);
  } catch (const plcomp::ConfigError& e) {
    std::cerr << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 1;
}
