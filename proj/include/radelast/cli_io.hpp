#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "radelast/evolution.hpp"

namespace radelast {

/// Parse or validation failure; field names the offending key ("grid.N").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string field = {}, int line = -1, int column = -1)
      : std::runtime_error(what), field_(std::move(field)), line_(line), column_(column) {}
  const std::string& field() const { return field_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string field_;
  int line_;
  int column_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using EnvMap = std::map<std::string, std::string>;

/// Variables named RADELAST_<SECTION>__<KEY> (or RADELAST_<KEY> for top-level
/// keys) from the process environment.
EnvMap environment_overrides();

/// YAML text to a validated RunConfig. Unknown keys are errors; env entries
/// override file values, matched case-insensitively.
RunConfig parse_config_text(const std::string& text, const EnvMap& env = {});
RunConfig parse_config_file(const std::filesystem::path& path, const EnvMap& env = {});

/// Throws ConfigError naming the first invalid field.
void validate(const RunConfig& cfg);

/// YAML that parse_config_text maps back to an equal RunConfig.
std::string serialize(const RunConfig& cfg);

/// Shortest round-trip double formatting shared by every output file.
std::string format_number(double x);

struct OutputFiles {
  std::filesystem::path diagnostics;
  std::vector<std::filesystem::path> snapshots;
  std::filesystem::path manifest;
};

/**
 * diagnostics.csv (one row per state, step 0 included), snapshots/step_XXXXXX.csv
 * (rho, alpha, beta, gamma, v at every node; beta averaged to nodes) and
 * manifest.json with the config echo and git-blob SHA-1 of each file.
 */
OutputFiles write_outputs(const Trajectory& traj, const std::filesystem::path& out_dir);

/// Git blob id: sha1("blob <len>\0" + content).
std::string git_blob_sha1(const std::string& content);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const;
};

Table read_csv(const std::filesystem::path& path);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal SVG line chart.
std::string svg_line_chart(const std::string& title, const std::string& xlabel, const std::vector<Series>& series);

}  // namespace radelast
