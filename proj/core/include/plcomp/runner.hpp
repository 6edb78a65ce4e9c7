#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "plcomp/config.hpp"

namespace plcomp {

struct TrialStatus {
  std::string name;
  bool diverged = false;
  std::string note;
};

struct RunResult {
  int exit_status = 0;  // 0, or 2 when any trial diverged
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> artifacts;  // relative to out_dir, manifest last
  std::vector<TrialStatus> trials;
  std::size_t diverged = 0;
  std::vector<std::string> warnings;
};

/// Warnings that do not block a run: odd k, step size above the stability bound.
std::vector<std::string> config_warnings(const ExperimentConfig& config);

/// Runs the configured experiment into config.output and writes manifest.json
/// listing every artifact with its sha256. Throws ConfigError before doing any
/// work if the config does not validate.
RunResult run_experiment(const ExperimentConfig& config);

/// Runs fn(0..n-1) on at most `parallelism` threads. Exceptions thrown by a
/// task are rethrown (the first by index) after every task has finished.
void run_work_queue(std::size_t n, std::size_t parallelism, const std::function<void(std::size_t)>& fn);

}  // namespace plcomp
