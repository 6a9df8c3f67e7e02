#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "doctest.h"
#include "wentzell/error.hpp"
#include "wentzell/specfun.hpp"

using namespace wentzell;

namespace {

// E_a(-t^a) = (sin(a pi)/pi) int_0^inf e^{-r t} r^{a-1} / (r^{2a} + 2 r^a cos(a pi) + 1) dr
double ml_integral(double a, double x) {
  const double t = std::pow(x, 1.0 / a);
  boost::math::quadrature::exp_sinh<double> q;
  auto g = [&](double r) {
    const double ra = std::pow(r, a);
    return std::exp(-r * t) * ra / r / (ra * ra + 2.0 * ra * std::cos(a * M_PI) + 1.0);
  };
  return std::sin(a * M_PI) / M_PI * q.integrate(g, 1e-14);
}

}  // namespace

TEST_CASE("E_1(-x) is exp(-x)") {
  for (double x : {0.0, 0.1, 1.0, 5.0, 30.0}) CHECK(mittag_leffler_neg(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-14));
}

TEST_CASE("E_1/2(-x) is exp(x^2) erfc(x)") {
  for (double x : {0.0, 0.05, 0.5, 1.0, 2.0, 4.0, 6.0, 20.0}) {
    const double ref = x < 8 ? std::exp(x * x) * std::erfc(x)
                             : 1.0 / (x * std::sqrt(M_PI)) * (1.0 - 1.0 / (2 * x * x) + 3.0 / (4 * std::pow(x, 4)));
    CHECK(mittag_leffler_neg(0.5, x) == doctest::Approx(ref).epsilon(x < 8 ? 1e-12 : 1e-5));
  }
}

TEST_CASE("E_alpha(-x) matches its integral representation") {
  for (double a : {0.2, 0.3, 0.7, 0.9})
    for (double x : {0.01, 0.3, 1.0, 3.0, 10.0, 50.0}) {
      CAPTURE(a);
      CAPTURE(x);
      CHECK(mittag_leffler_neg(a, x) == doctest::Approx(ml_integral(a, x)).epsilon(1e-9));
    }
}

TEST_CASE("E_alpha(-x) is completely monotone in practice") {
  for (double a : {0.3, 0.6, 0.95}) {
    double prev = 1.0;
    for (double x = 0.0; x < 100.0; x += 0.37) {
      const double v = mittag_leffler_neg(a, x);
      CHECK(v <= prev);
      CHECK(v > 0.0);
      prev = v;
    }
  }
  CHECK_THROWS_AS(mittag_leffler_neg(0.5, -1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler_neg(1.5, 1.0), DomainError);
}

TEST_CASE("gaussian kernel") {
  CHECK(gaussian_kernel(1.0, 0.0) == doctest::Approx(1.0 / std::sqrt(4 * M_PI)));
  CHECK(gaussian_kernel(0.5, 1.0) == doctest::Approx(std::exp(-0.5) / std::sqrt(2 * M_PI)));
  boost::math::quadrature::tanh_sinh<double> q;
  const double mass = q.integrate([](double z) { return gaussian_kernel(0.3, z); }, -30.0, 30.0);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stable density at alpha 1/2 is the Levy density") {
  for (double t : {0.5, 1.0, 2.0})
    for (double s : {0.05, 0.3, 1.0, 4.0, 30.0}) {
      const double ref = t / (2.0 * std::sqrt(M_PI)) * std::pow(s, -1.5) * std::exp(-t * t / (4.0 * s));
      CHECK(stable_density_h(0.5, t, s) == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("stable density integrates to one and has the right transform") {
  boost::math::quadrature::exp_sinh<double> q;
  for (double a : {0.3, 0.7}) {
    const double mass = q.integrate([&](double s) { return stable_density_h(a, 1.0, s); }, 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-7));
    const double lt = q.integrate([&](double s) { return std::exp(-2.0 * s) * stable_density_h(a, 1.5, s); }, 1e-12);
    CHECK(lt == doctest::Approx(std::exp(-1.5 * std::pow(2.0, a))).epsilon(1e-7));
  }
}

TEST_CASE("inverse stable density at alpha 1/2 is a folded Gaussian") {
  CHECK(inverse_stable_density_l(0.5, 1.0, 1.0) == doctest::Approx(0.43939129).epsilon(1e-7));
  for (double t : {0.2, 1.0, 3.0})
    for (double x : {0.0, 0.1, 1.0, 2.5}) {
      const double ref = std::exp(-x * x / (4.0 * t)) / std::sqrt(M_PI * t);
      CHECK(inverse_stable_density_l(0.5, t, x) == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("inverse stable density has the right transform") {
  boost::math::quadrature::exp_sinh<double> q;
  for (double a : {0.4, 0.8})
    for (double x : {0.2, 1.0}) {
      const double lam = 1.7;
      const double lt = q.integrate([&](double t) { return std::exp(-lam * t) * inverse_stable_density_l(a, t, x); }, 1e-12);
      CHECK(lt == doctest::Approx(std::pow(lam, a - 1) * std::exp(-x * std::pow(lam, a))).epsilon(1e-7));
    }
}

TEST_CASE("series perturbation hook changes values and resets") {
  const double clean = mittag_leffler_neg(0.5, 0.3);
  testing::set_series_perturbation(1e-6);
  CHECK(testing::series_perturbation() == 1e-6);
  CHECK(mittag_leffler_neg(0.5, 0.3) != clean);
  testing::set_series_perturbation(0.0);
  CHECK(mittag_leffler_neg(0.5, 0.3) == clean);
}
