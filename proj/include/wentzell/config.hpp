#pragma once
// Flat key = value experiment configuration.
//
//   # comment
//   experiment = exit_time
//   seed = 42
//   t_grid = [0.5, 1, 2]
//   datum = "indicator:1"
//
// Keys are unique; unknown keys, malformed values and out-of-range numbers are
// reported as ConfigError with the offending line.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wentzell/datum.hpp"
#include "wentzell/transforms.hpp"

namespace wentzell {

struct ExperimentConfig {
  std::string experiment;
  std::string name;
  std::uint64_t seed = 0;
  ModelParams params;
  std::string datum = "constant:1";
  double x = 0.0;
  std::vector<double> t_grid;
  std::vector<double> x_grid;
  std::vector<double> lambda_grid;
  std::vector<double> alpha_grid;
  std::vector<double> xi_grid;
  std::size_t n = 10000;
  double dt = 1e-3;
  unsigned threads = 0;
  double k = 3.0;
  double bias_budget = 0.0;
  double tolerance = 0.0;
  double epsilon = 1.0;
  double s = 0.0;
  double horizon = 0.0;
  double level = 0.01;
  std::size_t draws = 5;
  std::string out = ".";
  // Keys present in the source text.
  std::set<std::string> given;
};

ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::filesystem::path& file);

// Grammar: constant:V | indicator:EPS | indicator_positive | exponential:BETA[:AMP]
//        | point_mass[:W] | tabulated:Y0/F0;Y1/F1;...[:TAIL_RATE]
InitialDatum parse_datum(std::string_view spec);

// Deterministic text form of every field (threads and out excluded) and its hash.
std::string canonical_config(const ExperimentConfig& c);
std::uint64_t config_hash(const ExperimentConfig& c);
std::string hex64(std::uint64_t v);

}  // namespace wentzell
