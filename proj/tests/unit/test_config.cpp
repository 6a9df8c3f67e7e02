#include <string>

#include "doctest.h"
#include "wentzell/config.hpp"
#include "wentzell/error.hpp"

using namespace wentzell;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    parse_experiment_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return 999;
}

}  // namespace

TEST_CASE("parses a full config") {
  const auto c = parse_experiment_config(R"(
# occupation run
experiment = occupation
name = "occ # not a comment"
seed = 42
eta = 1
sigma = 1.0
alpha = 0.5   # trailing comment
t_grid = [1, 2.5]
n = 100
dt = 1e-3
datum = "exponential:2:0.5"
)");
  CHECK(c.experiment == "occupation");
  CHECK(c.name == "occ # not a comment");
  CHECK(c.seed == 42);
  CHECK(c.params.alpha == 0.5);
  CHECK(c.t_grid == std::vector<double>{1.0, 2.5});
  CHECK(c.n == 100);
  CHECK(c.given.count("dt") == 1);
  CHECK(c.given.count("x") == 0);
}

TEST_CASE("name defaults to the experiment") {
  const auto c = parse_experiment_config("experiment = conservation\nseed = 1\n");
  CHECK(c.name == "conservation");
  CHECK(c.datum == "constant:1");
}

TEST_CASE("errors carry the line") {
  CHECK(error_line("experiment = conservation\nseed = 1\nbogus = 3\n") == 3);
  CHECK(error_line("experiment = conservation\nseed = 1\nseed = 2\n") == 3);
  CHECK(error_line("experiment = conservation\nseed = 1\nalpha = 1.5\n") == 3);
  CHECK(error_line("experiment = conservation\nseed = 1\nalpha = abc\n") == 3);
  CHECK(error_line("experiment = conservation\nseed = -4\n") == 2);
  CHECK(error_line("experiment = nothing\nseed = 1\n") == 1);
  CHECK(error_line("experiment = conservation\nseed = 1\ndatum = \"wobbly:3\"\n") == 3);
  CHECK(error_line("experiment = conservation\nseed = 1\nt_grid = [1, -2]\n") == 3);
  CHECK(error_line("experiment = conservation\nseed = 1\nt_grid = [1, 2\n") == 3);
  CHECK(error_line("experiment = conservation\nseed = 1\njust words\n") == 3);
  CHECK(error_line("experiment = conservation\n") == 0);
  CHECK(error_line("seed = 3\n") == 0);
  CHECK(error_line("experiment = conservation\nseed = 1\neta = 0\nsigma = 0\n") == 4);
  CHECK_THROWS_AS(load_experiment_config("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("datum grammar") {
  CHECK(parse_datum("constant:2")(5.0) == 2.0);
  CHECK(parse_datum("indicator:1")(1.0) == 1.0);
  CHECK(parse_datum("indicator:1")(1.5) == 0.0);
  CHECK(parse_datum("indicator_positive")(0.0) == 0.0);
  CHECK(parse_datum("indicator_positive")(0.1) == 1.0);
  CHECK(parse_datum("exponential:2")(1.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(parse_datum("exponential:2:3")(0.0) == 3.0);
  CHECK(parse_datum("point_mass")(0.0) == 1.0);
  CHECK(parse_datum("point_mass:0.5")(1.0) == 0.0);
  const auto t = parse_datum("tabulated:0/1;1/3;2/0:-1");
  CHECK(t(0.5) == doctest::Approx(2.0));
  CHECK(t(1.5) == doctest::Approx(1.5));
  CHECK_THROWS_AS(parse_datum("exponential:-1"), DomainError);
  CHECK_THROWS_AS(parse_datum("tabulated:1/1;2/2"), DomainError);
  CHECK_THROWS_AS(parse_datum("constant"), DomainError);
}

TEST_CASE("config hash tracks content, not threads or output") {
  auto a = parse_experiment_config("experiment = conservation\nseed = 1\n");
  auto b = a;
  b.threads = 7;
  b.out = "/tmp/elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  b.dt = 2e-3;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(hex64(0xabcULL) == "0000000000000abc");
  CHECK(canonical_config(a).find("seed=1\n") != std::string::npos);
}
