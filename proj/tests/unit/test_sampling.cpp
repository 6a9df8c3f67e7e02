#include <cmath>
#include <vector>

#include "doctest.h"
#include "wentzell/error.hpp"
#include "wentzell/estimators.hpp"
#include "wentzell/rng.hpp"
#include "wentzell/sampling.hpp"
#include "wentzell/specfun.hpp"

using namespace wentzell;

TEST_CASE("alpha = 1 is deterministic drift") {
  RngStream r(1, 1);
  CHECK(sample_stable(1.0, 2.5, r) == 2.5);
  CHECK(r.position() == 0);
  CHECK(sample_stable(0.5, 0.0, r) == 0.0);
}

TEST_CASE("stable draws at alpha 1/2 follow the Levy law") {
  RngStream r(2, 2);
  std::vector<double> s(20000);
  for (auto& v : s) v = sample_stable(0.5, 1.3, r);
  const auto ks = ks_one_sample(s, [](double x) { return x <= 0 ? 0.0 : std::erfc(1.3 / (2 * std::sqrt(x))); });
  CHECK(ks.p_value > 0.001);
}

TEST_CASE("stable draws have the right Laplace transform") {
  for (double a : {0.3, 0.7}) {
    RngStream r(3, static_cast<std::uint64_t>(a * 10));
    std::vector<double> e1(100000), e2(100000);
    for (std::size_t i = 0; i < e1.size(); ++i) {
      const double h = sample_stable(a, 0.8, r);
      e1[i] = std::exp(-h);
      e2[i] = std::exp(-3.0 * h);
    }
    const auto m1 = mc_estimate(e1), m2 = mc_estimate(e2);
    CHECK(std::fabs(m1.mean - std::exp(-0.8)) < 4 * m1.std_error);
    CHECK(std::fabs(m2.mean - std::exp(-0.8 * std::pow(3.0, a))) < 4 * m2.std_error);
  }
}

TEST_CASE("Mittag-Leffler holding times") {
  RngStream r(4, 4);
  std::vector<double> s(20000);
  for (auto& v : s) v = sample_mittag_leffler(0.6, 1.5, r);
  const auto ks = ks_one_sample(s, [](double t) { return t <= 0 ? 0.0 : 1.0 - mittag_leffler_neg(0.6, 1.5 * std::pow(t, 0.6)); });
  CHECK(ks.p_value > 0.001);
  RngStream e(4, 5);
  for (int i = 0; i < 10; ++i) CHECK(sample_mittag_leffler(1.0, 2.0, e) > 0.0);
}

TEST_CASE("inverse stable at alpha 1/2 is a folded Gaussian") {
  RngStream r(5, 5);
  std::vector<double> s(20000);
  for (auto& v : s) v = sample_inverse_stable(0.5, 2.0, r);
  const auto ks = ks_one_sample(s, [](double x) { return x <= 0 ? 0.0 : std::erf(x / (2 * std::sqrt(2.0))); });
  CHECK(ks.p_value > 0.001);
  CHECK_THROWS_AS(sample_inverse_stable(1.0, 1.0, r), DomainError);
}

TEST_CASE("subordinator over a grid") {
  RngStream r(6, 6);
  std::vector<double> g = {0.0, 0.1, 0.1, 0.5, 2.0};
  const auto h = sample_subordinator_over_increments(0.5, g, r);
  REQUIRE(h.size() == g.size());
  CHECK(h[0] == 0.0);
  CHECK(h[2] == h[1]);
  for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i] >= h[i - 1]);
  CHECK(r.position() == 6);  // three positive increments, two uniforms each

  std::vector<double> bad = {0.1, 0.2};
  CHECK_THROWS_AS(sample_subordinator_over_increments(0.5, bad, r), DomainError);
  std::vector<double> down = {0.0, 0.2, 0.1};
  CHECK_THROWS_AS(sample_subordinator_over_increments(0.5, down, r), DomainError);
  const auto lin = sample_subordinator_over_increments(1.0, g, r);
  CHECK(lin == g);
}

TEST_CASE("the sum of increments has the law of one draw") {
  std::vector<double> g;
  for (int i = 0; i <= 50; ++i) g.push_back(i * 0.02);
  std::vector<double> a(10000), b(10000);
  RngStream r1(7, 1), r2(7, 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = sample_subordinator_over_increments(0.6, g, r1).back();
    b[i] = sample_stable(0.6, 1.0, r2);
  }
  CHECK(ks_two_sample(a, b).p_value > 0.001);
}

TEST_CASE("same stream, same draws") {
  RngStream a(8, 8), b(8, 8);
  for (int i = 0; i < 100; ++i) CHECK(sample_stable(0.4, 1.0, a) == sample_stable(0.4, 1.0, b));
}
