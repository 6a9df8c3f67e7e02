#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "wentzell/config.hpp"
#include "wentzell/error.hpp"
#include "wentzell/experiments.hpp"
#include "wentzell/rng.hpp"
#include "wentzell/specfun.hpp"

using namespace wentzell;

namespace {

ExperimentConfig cfg(const std::string& text) { return parse_experiment_config(text); }

}  // namespace

TEST_CASE("conservation with a constant datum is exact") {
  const auto r = run_experiment(cfg("experiment = conservation\nseed = 3\nn = 2000\nalpha = 0.5\neta = 1\nt_grid = [0.5, 1]\n"));
  CHECK(r.pass);
  CHECK(r.report["schema_version"] == kReportSchemaVersion);
  CHECK(r.report["results"]["points"][1]["mc"]["mean"] == 1.0);
  CHECK(r.report["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("reports do not depend on the thread count") {
  auto c = cfg("experiment = xbar_expectation\nseed = 5\nn = 3000\nalpha = 0.6\neta = 1\nc = 0.5\n"
               "datum = \"exponential:1\"\nt_grid = [0.5, 1]\nbias_budget = 0.01\n");
  c.threads = 1;
  const auto one = run_experiment(c);
  c.threads = 5;
  const auto five = run_experiment(c);
  CHECK(one.report.dump() == five.report.dump());
  REQUIRE(one.artifacts.size() == five.artifacts.size());
  CHECK(one.artifacts[0].content == five.artifacts[0].content);
  CHECK(one.pass);
}

TEST_CASE("holding-time experiment") {
  const auto r = run_experiment(cfg("experiment = holding_time\nseed = 9\nn = 20000\nalpha = 0.5\neta = 0.5\n"));
  CHECK(r.pass);
  CHECK(r.artifacts.at(0).content.rfind("t,survival,stderr,reference,z\n", 0) == 0);
  CHECK(r.report["results"]["median_relative_error"].get<double>() < 0.05);
}

TEST_CASE("unsupported combinations and exit codes") {
  const auto dir = std::filesystem::temp_directory_path() / "wentzell_test_out";
  std::filesystem::remove_all(dir);
  std::ostringstream log;
  auto bad = cfg("experiment = conservation\nseed = 1\ndatum = \"exponential:1\"\n");
  bad.out = dir.string();
  CHECK_THROWS_AS(run_experiment_to_dir(bad, log), ConfigError);

  auto ok = cfg("experiment = ml_inversion\nseed = 1\nalpha_grid = [0.5]\nxi_grid = [1]\nt_grid = [1]\n");
  ok.out = dir.string();
  CHECK(run_experiment_to_dir(ok, log) == 0);
  CHECK(std::filesystem::exists(dir / "ml_inversion.json"));
  CHECK(std::filesystem::exists(dir / "ml_inversion.csv"));

  auto strict = ok;
  strict.tolerance = 1e-300;
  CHECK(run_experiment_to_dir(strict, log) == 1);

  auto diverge = cfg("experiment = invert\nseed = 1\neta = 1\nc = 1\ndatum = \"tabulated:0/1;1/1:3\"\nt_grid = [1]\n");
  diverge.out = dir.string();
  CHECK(run_experiment_to_dir(diverge, log) == 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("corrupted Mittag-Leffler series fails the inversion criterion") {
  const auto crit = acceptance_criteria(VerifyLevel::quick, kDefaultSeed, 0);
  REQUIRE(crit.at(0).id == 1);
  const std::vector<Criterion> first = {crit[0]};
  CHECK(run_criteria(first, VerifyLevel::quick, nullptr).at(0).pass);
  testing::set_series_perturbation(1e-6);
  const auto broken = run_criteria(first, VerifyLevel::quick, nullptr);
  testing::set_series_perturbation(0.0);
  CHECK_FALSE(broken.at(0).pass);
}

TEST_CASE("seed manifest lists every run") {
  const auto crit = acceptance_criteria(VerifyLevel::full, 77, 0);
  CHECK(crit.size() == 10);
  const auto m = seed_manifest(crit);
  CHECK(m.size() == 10);
  CHECK(m[6]["runs"].size() == 2);
  CHECK(m[0]["runs"][0]["seed"] == derive_seed(77, "c01_ml_inversion"));
}
