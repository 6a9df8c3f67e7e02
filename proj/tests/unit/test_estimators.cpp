#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "wentzell/error.hpp"
#include "wentzell/estimators.hpp"
#include "wentzell/rng.hpp"

using namespace wentzell;

TEST_CASE("mean and standard error") {
  const std::vector<double> v = {0.0, 1.0};
  const auto e = mc_estimate(v, 17);
  CHECK(e.mean == 0.5);
  CHECK(e.std_error == doctest::Approx(0.3535534).epsilon(1e-7));
  CHECK(e.n == 2);
  CHECK(e.seed == 17);
  const std::vector<double> one = {1.0};
  CHECK_THROWS_AS(mc_estimate(one), DomainError);
  const std::vector<double> same(1000, 0.25);
  CHECK(mc_estimate(same).std_error == 0.0);
}

TEST_CASE("streaming accumulator agrees and merges") {
  RngStream r(1, 1);
  std::vector<double> v(1001);
  for (auto& x : v) x = r.normal() + 3.0;
  McAccumulator all, left, right;
  for (std::size_t i = 0; i < v.size(); ++i) {
    all.add(v[i]);
    (i < 400 ? left : right).add(v[i]);
  }
  left.merge(right);
  const auto e = mc_estimate(v);
  CHECK(all.estimate().mean == doctest::Approx(e.mean).epsilon(1e-13));
  CHECK(all.estimate().std_error == doctest::Approx(e.std_error).epsilon(1e-12));
  CHECK(left.estimate().mean == doctest::Approx(e.mean).epsilon(1e-13));
  CHECK(left.estimate().std_error == doctest::Approx(e.std_error).epsilon(1e-12));
  CHECK(left.count() == 1001);
}

TEST_CASE("survival and median") {
  const std::vector<double> v = {1, 2, 3, 4};
  const std::vector<double> t = {0.5, 2.0, 4.0};
  const auto s = empirical_survival(v, t);
  CHECK(s[0].p == 1.0);
  CHECK(s[1].p == 0.5);
  CHECK(s[1].std_error == doctest::Approx(0.25));
  CHECK(s[2].p == 0.0);
  CHECK(empirical_median(v) == 2.5);
  const std::vector<double> odd = {5, 1, 3};
  CHECK(empirical_median(odd) == 3.0);
}

TEST_CASE("comparison verdicts") {
  auto run = [](std::size_t n, double odd_diff, double budget) {
    std::vector<double> grid(n), ref(n);
    std::vector<McEstimate> mc(n);
    for (std::size_t i = 0; i < n; ++i) {
      grid[i] = static_cast<double>(i);
      mc[i] = {1.0, 0.1, 100, 0};
      ref[i] = i == 0 ? 1.0 + odd_diff : 1.05;
    }
    return compare_with_reference(grid, mc, ref, 3.0, budget);
  };
  const auto two = run(2, 0.35, 0.0);
  CHECK(two.points[1].pass);
  CHECK_FALSE(two.points[0].pass);
  CHECK(two.points[0].z == doctest::Approx(-3.5));
  CHECK(two.pass_fraction == 0.5);
  CHECK_FALSE(two.pass);
  CHECK(run(20, 0.35, 0.0).pass);        // one soft miss in twenty
  CHECK_FALSE(run(20, 0.65, 0.0).pass);  // beyond 2k stderr
  CHECK(run(2, 0.35, 0.1).pass);         // absorbed by the bias budget
  const std::vector<double> g = {1.0};
  const std::vector<McEstimate> m = {{1.0, 0.1, 2, 0}, {1.0, 0.1, 2, 0}};
  CHECK_THROWS_AS(compare_with_reference(g, m, g), DomainError);
}

TEST_CASE("Kolmogorov-Smirnov") {
  CHECK(kolmogorov_tail(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_tail(0.0) == 1.0);
  RngStream r(2, 2);
  std::vector<double> u(5000), w(5000), shifted(5000);
  for (auto& x : u) x = r.uniform();
  for (auto& x : w) x = r.uniform();
  for (auto& x : shifted) x = r.uniform() + 0.1;
  const auto one = ks_one_sample(u, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(one.p_value > 0.001);
  CHECK(one.n2 == 0);
  CHECK(ks_two_sample(u, w).p_value > 0.001);
  const auto bad = ks_two_sample(u, shifted);
  CHECK(bad.statistic == doctest::Approx(0.1).epsilon(0.3));
  CHECK(bad.p_value < 1e-6);
  const std::vector<double> a = {1, 2, 3}, b = {4, 5, 6};
  CHECK(ks_two_sample(a, b).statistic == 1.0);
}

TEST_CASE("reports and CSV") {
  const std::vector<double> grid = {1.0};
  const std::vector<McEstimate> mc = {{1.0, 0.0, 10, 3}};
  const std::vector<double> ref = {2.0};
  const auto r = compare_with_reference(grid, mc, ref);
  nlohmann::json j = r;
  CHECK(j["pass"] == false);
  CHECK(j["points"][0]["z"] == "-inf");
  std::ostringstream csv;
  write_comparison_csv(csv, r);
  CHECK(csv.str().rfind("x,mean,stderr,reference,z,pass\n", 0) == 0);
  std::ostringstream s;
  const std::vector<SurvivalPoint> sp = {{1.0, 0.5, 0.1}};
  write_survival_csv(s, sp);
  CHECK(s.str() == "t,survival,stderr\n1,0.5,0.10000000000000001\n");
}
