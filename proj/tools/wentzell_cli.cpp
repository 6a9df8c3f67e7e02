// wentzell: command-line runner for experiments and the acceptance suite.
//
// Exit status: 0 every verdict passed, 1 a verdict failed, 2 bad configuration
// or usage, 3 numerical failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wentzell/config.hpp"
#include "wentzell/error.hpp"
#include "wentzell/experiments.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  unsigned threads = 0;
  std::string level = "quick";
};

int run_config(const Options& o, const char* required_kind) {
  auto cfg = wentzell::load_experiment_config(o.config);
  if (required_kind && cfg.experiment != required_kind)
    throw wentzell::ConfigError(0, std::string("this subcommand needs experiment = ") + required_kind + ", got '" +
                                       cfg.experiment + "'");
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.out = *o.out;
  if (o.threads) cfg.threads = o.threads;
  return wentzell::run_experiment_to_dir(cfg, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo and transform experiments for Brownian motion with a fractional dynamic boundary condition"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Override the seed");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  };

  auto* simulate = app.add_subcommand("simulate", "Write sample paths of Xbar (config: experiment = simulate)");
  simulate->add_option("--config", o.config, "Config file")->required()->check(CLI::ExistingFile);
  add_common(simulate);

  auto* invert = app.add_subcommand("invert", "Invert the boundary-problem transforms (config: experiment = invert)");
  invert->add_option("--config", o.config, "Config file")->required()->check(CLI::ExistingFile);
  add_common(invert);

  auto* experiment = app.add_subcommand("experiment", "Run one experiment config");
  experiment->add_option("--config", o.config, "Config file")->required()->check(CLI::ExistingFile);
  add_common(experiment);

  auto* verify = app.add_subcommand("verify", "Run the acceptance battery");
  verify->add_option("--level", o.level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*simulate) return run_config(o, "simulate");
    if (*invert) return run_config(o, "invert");
    if (*experiment) return run_config(o, nullptr);
    const auto level = o.level == "full" ? wentzell::VerifyLevel::full : wentzell::VerifyLevel::quick;
    return wentzell::verify_suite(level, o.seed.value_or(wentzell::kDefaultSeed), o.threads, o.out.value_or(""),
                                  std::cout);
  } catch (const wentzell::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}
