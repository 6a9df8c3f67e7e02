#pragma once
// Experiment runners shared by the command line and the acceptance binary.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "wentzell/config.hpp"

namespace wentzell {

inline constexpr int kReportSchemaVersion = 1;

struct Artifact {
  std::string filename;
  std::string content;
};

struct ExperimentResult {
  std::string name;
  bool pass = false;
  std::string summary;  // one line
  nlohmann::json report;
  std::vector<Artifact> artifacts;
};

// Throws DomainError / NumericError / InversionError on numerical failure.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Runs one experiment and writes <out>/<name>.json plus CSV artifacts.
// Exit status: 0 all verdicts pass, 1 a verdict failed, 3 numerical failure.
// Parameter combinations the experiment does not support throw ConfigError.
int run_experiment_to_dir(const ExperimentConfig& config, std::ostream& log);

enum class VerifyLevel { quick, full };

struct Criterion {
  int id;
  std::string title;
  std::vector<ExperimentConfig> configs;
  double time_limit_seconds = 0.0;  // enforced at full level only; 0 = none
};

// Acceptance criteria 1-10 as experiment configurations. Quick level reduces
// sample counts and refines less.
std::vector<Criterion> acceptance_criteria(VerifyLevel level, std::uint64_t master_seed, unsigned threads);

struct CriterionOutcome {
  int id;
  std::string title;
  bool pass;
  std::string detail;
  double seconds;
  std::vector<ExperimentResult> results;
};

std::vector<CriterionOutcome> run_criteria(const std::vector<Criterion>& criteria, VerifyLevel level,
                                           std::ostream* log);

// Verdicts and per-experiment reports, without timings.
nlohmann::json suite_report(const std::vector<CriterionOutcome>& outcomes, VerifyLevel level,
                            std::uint64_t master_seed);
nlohmann::json seed_manifest(const std::vector<Criterion>& criteria);

// Criteria 1-10 at the given level, then criterion 11 (two quick runs with the
// same seed must give identical reports). Prints one line per criterion and,
// when out_dir is non-empty, writes suite_report.json, manifest.json and the
// experiment artifacts. Returns 0 if every criterion passes, else 1.
int verify_suite(VerifyLevel level, std::uint64_t master_seed, unsigned threads, const std::string& out_dir,
                 std::ostream& log);

inline constexpr std::uint64_t kDefaultSeed = 20240611;

}  // namespace wentzell
