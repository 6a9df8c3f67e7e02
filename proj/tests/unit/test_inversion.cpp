#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "wentzell/error.hpp"
#include "wentzell/inversion.hpp"
#include "wentzell/specfun.hpp"
#include "wentzell/transforms.hpp"

using namespace wentzell;

TEST_CASE("Talbot inverts elementary transforms") {
  LaplaceFn exp1([](Complex l) { return 1.0 / (l + 1.0); }, "1/(l+1)");
  LaplaceFn ramp([](Complex l) { return 1.0 / (l * l); }, "1/l^2");
  LaplaceFn rsqrt([](Complex l) { return 1.0 / std::sqrt(l); }, "l^-1/2");
  for (double t : {0.1, 1.0, 5.0, 20.0}) {
    CHECK(invert_talbot(exp1, t) == doctest::Approx(std::exp(-t)).epsilon(1e-10));
    CHECK(invert_talbot(ramp, t) == doctest::Approx(t).epsilon(1e-10));
    CHECK(invert_talbot(rsqrt, t) == doctest::Approx(1.0 / std::sqrt(M_PI * t)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(invert_talbot(exp1, 0.0), DomainError);
  CHECK_THROWS_AS(invert_talbot(exp1, 1.0, 1), DomainError);
}

TEST_CASE("Gaver-Stehfest agrees on smooth transforms") {
  LaplaceFn exp1([](Complex l) { return 1.0 / (l + 1.0); },
                 [](long double l) { return 1.0L / (l + 1.0L); }, "1/(l+1)");
  for (double t : {0.2, 1.0, 3.0}) {
    CHECK(invert_gaver_stehfest(exp1, t) == doctest::Approx(std::exp(-t)).epsilon(1e-7));
    const auto c = invert_checked(exp1, t, 1e-6);
    CHECK(c.discrepancy <= 1e-6 * c.value);
  }
  CHECK_THROWS_AS(invert_gaver_stehfest(exp1, 1.0, 7), DomainError);
}

TEST_CASE("disagreement between methods is reported") {
  // real-axis evaluator deliberately inconsistent with the complex one
  LaplaceFn mismatch([](Complex l) { return 1.0 / (l + 1.0); },
                     [](long double l) { return 1.0L / (l + 1.001L); }, "mismatch");
  CHECK_THROWS_AS(invert_checked(mismatch, 1.0, 1e-6), InversionError);
  CHECK_NOTHROW(invert_checked(mismatch, 1.0, 1e-2));
}

TEST_CASE("Mittag-Leffler transform pair") {
  for (double a : {0.3, 0.5, 0.7})
    for (double xi : {0.5, 1.0, 2.0})
      for (double t : {0.1, 1.0, 10.0}) {
        const double ref = mittag_leffler_neg(a, xi * std::pow(t, a));
        CHECK(invert_talbot(mittag_leffler_laplace(a, xi), t) == doctest::Approx(ref).epsilon(1e-8));
      }
}

TEST_CASE("grid inversion and CSV export") {
  LaplaceFn exp1([](Complex l) { return 1.0 / (l + 1.0); }, "1/(l+1)");
  std::vector<double> ts = {0.5, 1.0};
  const auto v = invert_talbot_grid(exp1, ts);
  REQUIRE(v.size() == 2);
  CHECK(v[1] == invert_talbot(exp1, 1.0));
  std::ostringstream a, b;
  write_transform_csv(a, exp1, ts);
  write_inverse_csv(b, exp1, ts);
  CHECK(a.str().rfind("lambda,value\n", 0) == 0);
  CHECK(b.str().rfind("t,inverted_value\n", 0) == 0);
}
