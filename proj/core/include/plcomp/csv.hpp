#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "plcomp/population.hpp"
#include "plcomp/stages.hpp"

namespace plcomp {

inline constexpr std::string_view kTrajectorySchema = "plcomp.trajectory.v1";

/// Shortest round-trip decimal for finite values; "nan", "inf", "-inf" otherwise.
std::string format_double(double v);

/// "# schema=<schema> config_hash=<hash>" followed by the column header row.
std::string trajectory_csv(std::span<const StepRecord> records, std::string_view config_hash,
                           std::span<const double> batch_losses = {});

/// Ordered key=value report, one pair per line.
class KeyValueReport {
 public:
  void add(std::string key, std::string value) { items_.emplace_back(std::move(key), std::move(value)); }
  void add(std::string key, double value) { add(std::move(key), format_double(value)); }
  void add(std::string key, std::uint64_t value) { add(std::move(key), std::to_string(value)); }
  void add(std::string key, bool value) { add(std::move(key), std::string(value ? "true" : "false")); }
  void add(std::string key, const char* value) { add(std::move(key), std::string(value)); }

  std::string str() const;
  const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

/// Rectangular grid rows (resolution x resolution) with a leading comment line.
std::string slice_grid_csv(const LandscapeSlice& slice);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

std::string sha256_hex(std::string_view bytes);

}  // namespace plcomp
