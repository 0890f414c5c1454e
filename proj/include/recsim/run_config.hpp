#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "recsim/evaluation.hpp"
#include "recsim/experiments.hpp"
#include "recsim/rewiring.hpp"

namespace recsim {

/// Every setting the command-line driver understands. Unset fields fall
/// through to the next layer: flag > config file > built-in default.
struct RunOptions {
  // inputs and outputs
  std::optional<std::string> input;
  std::optional<std::string> ratings;
  std::optional<std::string> synthetic;
  std::optional<int> threshold;
  std::optional<std::string> output;
  std::optional<std::string> format;
  // rewiring
  std::optional<double> theta;
  std::optional<double> p;
  std::optional<std::size_t> list_length;
  std::optional<std::string> attachment;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_sweeps;
  std::optional<std::size_t> window;
  std::optional<double> eps;
  // experiments
  std::optional<std::vector<double>> theta_grid;
  std::optional<std::vector<double>> p_grid;
  std::optional<std::vector<double>> density_grid;
  std::optional<std::vector<std::string>> density_modes;
  std::optional<double> init_low;
  std::optional<double> init_high;
  std::optional<std::size_t> replicas;
  std::optional<std::size_t> jobs;
  // evaluation
  std::optional<double> probe_fraction;
  std::optional<std::size_t> divisions;
};

/// Parses a JSON config document. Unknown keys and wrongly typed values
/// raise InvalidInput. Grids may be arrays of numbers or grid strings.
RunOptions parse_run_config(const nlohmann::json& doc);
RunOptions load_run_config(const std::string& path);

/// Fields set in `top` replace those in `base`.
RunOptions overlay(RunOptions base, const RunOptions& top);

/// Resolved settings with built-in defaults applied.
RewiringConfig rewiring_config(const RunOptions& opts);
SplitSpec split_spec(const RunOptions& opts);
ExperimentOptions experiment_options(const RunOptions& opts);
std::vector<double> theta_grid(const RunOptions& opts);
std::vector<double> p_grid(const RunOptions& opts);
std::vector<double> density_grid(const RunOptions& opts);
std::vector<DensityMode> density_modes(const RunOptions& opts);

/// "a:b:step" (inclusive of b) or a comma-separated list. Values are rounded
/// to 12 decimals so "0:1:0.05" yields exact-looking grid points.
std::vector<double> parse_grid(std::string_view text);

/// Fully resolved settings for run manifests.
nlohmann::json to_json(const RunOptions& opts);

}  // namespace recsim
