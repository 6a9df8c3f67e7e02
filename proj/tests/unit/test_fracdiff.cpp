#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "wentzell/error.hpp"
#include "wentzell/fracdiff.hpp"
#include "wentzell/specfun.hpp"

using namespace wentzell;

namespace {

TimeSeries sampled(double dt, std::size_t n, double (*u)(double)) {
  TimeSeries s{dt, {}};
  for (std::size_t j = 0; j <= n; ++j) s.values.push_back(u(static_cast<double>(j) * dt));
  return s;
}

}  // namespace

TEST_CASE("Caputo kernel") {
  CHECK(caputo_kernel(0.5, 1.0) == doctest::Approx(1.0 / std::sqrt(M_PI)));
  CHECK(caputo_kernel(0.3, 2.0) == doctest::Approx(std::pow(2.0, -0.3) / std::tgamma(0.7)));
  const auto g = caputo_kernel_grid(0.4, 0.1, 5);
  REQUIRE(g.z.size() == 5);
  CHECK(g.z[4] == doctest::Approx(0.5));
  CHECK(g.values[4] == caputo_kernel(0.4, g.z[4]));
  for (double a : {0.2, 0.5, 0.8})
    for (double l : {0.1, 1.0, 10.0})
      CHECK(caputo_kernel_laplace(a, l) == doctest::Approx(std::pow(l, a - 1)).epsilon(1e-6));
  CHECK_THROWS_AS(caputo_kernel(1.0, 1.0), DomainError);
}

TEST_CASE("L1 scheme is exact on linear functions") {
  const auto u = sampled(0.01, 100, [](double t) { return 3.0 * t + 1.0; });
  for (double a : {0.25, 0.5, 0.75})
    CHECK(caputo_l1(u, a, 100) == doctest::Approx(3.0 / std::tgamma(2.0 - a)).epsilon(1e-12));
  CHECK(caputo_l1(sampled(0.01, 100, [](double t) { return t; }), 0.5, 100) ==
        doctest::Approx(1.1283792).epsilon(1e-7));
  CHECK(caputo_l1(u, 1.0, 50) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS(caputo_l1(u, 0.5, 0), DomainError);
  CHECK_THROWS_AS(caputo_l1(u, 0.5, 101), DomainError);
}

TEST_CASE("L1 scheme is linear and converges on t^2") {
  const auto a = sampled(1e-3, 1000, [](double t) { return t * t; });
  const auto b = sampled(1e-3, 1000, [](double t) { return std::sin(t); });
  TimeSeries c{1e-3, {}};
  for (std::size_t j = 0; j < a.values.size(); ++j) c.values.push_back(2.0 * a.values[j] - b.values[j]);
  CHECK(caputo_l1(c, 0.5, 1000) == doctest::Approx(2.0 * caputo_l1(a, 0.5, 1000) - caputo_l1(b, 0.5, 1000)).epsilon(1e-12));
  // D^a t^2 = 2 t^{2-a} / Gamma(3-a)
  CHECK(caputo_l1(a, 0.5, 1000) == doctest::Approx(2.0 / std::tgamma(2.5)).epsilon(1e-3));
}

TEST_CASE("boundary residual of the inverted solution") {
  const auto f = InitialDatum::exponential(1.0);
  std::vector<double> ts;
  for (int i = 1; i <= 20; ++i) ts.push_back(0.1 * i);
  const auto half = fbvp_residual(ModelParams{1.0, 1.0, 1.0, 0.5}, f, ts, 1e-3);
  const auto one = fbvp_residual(ModelParams{1.0, 1.0, 1.0, 1.0}, f, ts, 1e-3);
  double wh = 0, w1 = 0;
  for (const auto& p : half) wh = std::max(wh, std::fabs(p.residual));
  for (const auto& p : one) w1 = std::max(w1, std::fabs(p.residual));
  CHECK(wh <= 1e-3);
  CHECK(w1 <= 1e-6);
  CHECK(half[0].value == doctest::Approx(half[0].value));
  std::ostringstream csv;
  write_residual_csv(csv, half);
  CHECK(csv.str().rfind("t,residual\n", 0) == 0);
  const std::vector<double> off = {0.1005};
  CHECK_THROWS_AS(fbvp_residual(ModelParams{1.0, 1.0, 1.0, 0.5}, f, off, 1e-3), DomainError);
}

TEST_CASE("residual error shrinks with the step") {
  const auto f = InitialDatum::exponential(1.0);
  const std::vector<double> ts = {0.5, 1.0};
  const ModelParams m{1.0, 1.0, 1.0, 0.5};
  auto worst = [&](double dt) {
    double w = 0;
    for (const auto& p : fbvp_residual(m, f, ts, dt)) w = std::max(w, std::fabs(p.residual));
    return w;
  };
  const double coarse = worst(2e-3), fine = worst(1e-3);
  CHECK(coarse / fine > 2.0);
}

TEST_CASE("boundary derivative growth without reflection") {
  // sigma = 0: u(t,0) = f(0) E_a(-(c/eta) t^a). Oracle: least squares of
  // log|du/dt| on log t with du/dt from central differences of E_a.
  for (double a : {0.3, 0.5, 0.7}) {
    const double lo = 0.001, hi = 0.05;
    const int n = 20;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
      const double t = lo * std::pow(hi / lo, i / (n - 1.0));
      const double h = 1e-4 * t;
      const double d = (mittag_leffler_neg(a, std::pow(t + h, a)) - mittag_leffler_neg(a, std::pow(t - h, a))) / (2 * h);
      const double x = std::log(t), y = std::log(std::fabs(d));
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const auto fit = fit_boundary_derivative_growth(ModelParams{1.0, 0.0, 1.0, a}, InitialDatum::exponential(1.0), lo, hi, n);
    CAPTURE(a);
    CHECK(fit.exponent == doctest::Approx(slope + 1.0).epsilon(1e-5));
    CHECK(fit.exponent >= a / 2);
  }
}

TEST_CASE("A1 probe reports a finite gap") {
  const std::vector<double> xs = {0.5, 0.25, 0.1};
  const auto pr = assumption_a1_probe(ModelParams{1.0, 1.0, 1.0, 0.5}, InitialDatum::exponential(1.0), 1.0, xs, 1e-3);
  REQUIRE(pr.size() == 3);
  for (const auto& p : pr) {
    CHECK(std::isfinite(p.gap));
    CHECK(p.gap == doctest::Approx(p.derivative - p.second_derivative));
  }
}
