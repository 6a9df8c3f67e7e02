#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "doctest.h"
#include "wentzell/error.hpp"
#include "wentzell/transforms.hpp"

using namespace wentzell;

namespace {

// int_0^inf g, split at the given kinks.
template <class G>
double half_line(G g, std::vector<double> kinks) {
  kinks.push_back(0.0);
  std::sort(kinks.begin(), kinks.end());
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < kinks.size(); ++i)
    if (kinks[i + 1] > kinks[i]) total += ts.integrate(g, kinks[i], kinks[i + 1]);
  const double last = kinks.back();
  return total + es.integrate([&](double v) { return g(last + v); });
}

std::vector<double> kinks_of(const InitialDatum& f) {
  std::vector<double> k;
  for (const auto& s : f.segments())
    if (s.a > 0.0) k.push_back(s.a);
  return k;
}

// Half-line potentials of an integrable f by direct quadrature.
double q_exp_weighted(const InitialDatum& f, double lam) {
  return half_line([&](double y) { return std::exp(-y * std::sqrt(lam)) * f(y); }, kinks_of(f));
}

double q_dirichlet(const InitialDatum& f, double lam, double x) {
  const double k = std::sqrt(lam);
  auto g = [&](double y) { return (std::exp(-std::fabs(x - y) * k) - std::exp(-(x + y) * k)) / (2 * k) * f(y); };
  auto kinks = kinks_of(f);
  kinks.push_back(x);
  return half_line(g, kinks);
}

double oracle_fbvp(const ModelParams& m, const InitialDatum& f, double lam, double x) {
  const double a = (m.eta * std::pow(lam, m.alpha - 1) * f.at_zero() + m.sigma * q_exp_weighted(f, lam)) /
                   (m.eta * std::pow(lam, m.alpha) + m.sigma * std::sqrt(lam) + m.c);
  return q_dirichlet(f, lam, x) + a * std::exp(-x * std::sqrt(lam));
}

}  // namespace

TEST_CASE("constant datum with no killing is conserved") {
  const auto one = InitialDatum::constant(1.0);
  for (double alpha : {0.3, 0.5, 1.0})
    for (double x : {0.0, 0.4, 3.0})
      for (double lam : {0.1, 1.0, 7.0}) {
        const ModelParams m{0.7, 1.3, 0.0, alpha};
        CHECK(fbvp_transform(m, one, lam, x) == doctest::Approx(1.0 / lam).epsilon(1e-13));
      }
}

TEST_CASE("fbvp transform matches quadrature of its boundary-value solution") {
  const auto f = InitialDatum::exponential(1.5, 2.0);
  const auto g = InitialDatum::tabulated({0.0, 0.5, 1.5}, {1.0, 0.2, 0.8}, -1.0);
  for (const auto& d : {f, g})
    for (double alpha : {0.4, 1.0})
      for (double x : {0.0, 0.3, 2.0})
        for (double lam : {0.5, 3.0}) {
          const ModelParams m{0.5, 1.0, 0.5, alpha};
          CHECK(fbvp_transform(m, d, lam, x) == doctest::Approx(oracle_fbvp(m, d, lam, x)).epsilon(1e-9));
        }
}

TEST_CASE("Dirichlet potential of a constant") {
  const auto one = InitialDatum::constant(1.0);
  for (double lam : {0.2, 2.0})
    for (double x : {0.0, 0.5, 4.0})
      CHECK(dirichlet_potential(one, lam, x) == doctest::Approx((1 - std::exp(-x * std::sqrt(lam))) / lam).epsilon(1e-13));
  const auto f = InitialDatum::exponential(1.0);
  // min(x,y) against e^{-y}: 1 - e^{-x}
  CHECK(dirichlet_potential_limit(f, 2.0) == doctest::Approx(1 - std::exp(-2.0)).epsilon(1e-13));
}

TEST_CASE("alpha = 1 transforms coincide with the sticky resolvent") {
  const auto f = InitialDatum::exponential(0.7);
  const ModelParams m{0.8, 1.2, 0.3, 1.0};
  for (double x : {0.0, 1.0}) {
    const Complex lam(1.3, 0.4);
    const Complex r = sticky_resolvent(m, f, lam, x);
    CHECK(std::abs(fbvp_transform(m, f, lam, x) - r) < 1e-13);
    CHECK(std::abs(fivp_transform(m, f, lam, x) - r) < 1e-13);
  }
}

TEST_CASE("fivp transform is a subordinated resolvent") {
  const auto f = InitialDatum::exponential(0.7);
  const ModelParams m{0.8, 1.2, 0.3, 0.6};
  for (double lam : {0.3, 2.0}) {
    const Complex mu = std::pow(Complex(lam), m.alpha);
    const Complex want = std::pow(lam, m.alpha - 1) * sticky_resolvent(m, f, mu, 0.5);
    CHECK(fivp_transform(m, f, lam, 0.5) == doctest::Approx(want.real()).epsilon(1e-13));
  }
}

TEST_CASE("boundary derivative matches a finite difference") {
  const auto f = InitialDatum::exponential(1.1, 0.5);
  const ModelParams m{0.6, 1.0, 0.4, 0.5};
  const double h = 1e-5;
  for (double lam : {0.5, 4.0}) {
    const double fd = (-3 * fbvp_transform(m, f, lam, 0.0) + 4 * fbvp_transform(m, f, lam, h) - fbvp_transform(m, f, lam, 2 * h)) / (2 * h);
    CHECK(boundary_derivative_transform(m, f, lam) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("occupation transforms split total time") {
  const ModelParams m{1.0, 1.0, 0.0, 0.5};
  for (double lam : {0.2, 1.0, 5.0}) {
    const auto o = occupation_transforms(m, lam);
    CHECK(std::abs(o.interior + o.boundary - 1.0 / (lam * lam)) < 1e-13 / (lam * lam));
    const double b = m.eta * std::pow(lam, m.alpha - 2) / (m.eta * std::pow(lam, m.alpha) + m.sigma * std::sqrt(lam));
    CHECK(o.boundary.real() == doctest::Approx(b).epsilon(1e-13));
    CHECK(boundary_occupation_laplace(m)(lam) == doctest::Approx(b).epsilon(1e-13));
  }
}

TEST_CASE("boundary limit") {
  const ModelParams m{1.0, 1.0, 0.0, 0.5};
  CHECK(fbvp_boundary_limit(m, InitialDatum::constant(2.0)) == doctest::Approx(2.0));
}

TEST_CASE("parameter and growth errors") {
  const ModelParams zero{0.0, 0.0, 0.0, 0.5};
  CHECK_THROWS_AS(fbvp_transform(zero, InitialDatum::constant(1), 1.0, 0.0), DomainError);
  const ModelParams no_sigma{1.0, 0.0, 1.0, 0.5};
  CHECK_NOTHROW(fbvp_transform(no_sigma, InitialDatum::constant(1), 1.0, 0.0));
  CHECK_THROWS_AS(no_sigma.validate_for_paths(), DomainError);
  const auto grow = InitialDatum::tabulated({0.0, 1.0}, {1.0, 1.0}, 2.0);
  const ModelParams m{1.0, 1.0, 1.0, 0.5};
  CHECK_THROWS_AS(fbvp_transform(m, grow, 1.0, 0.0), DivergenceError);
  CHECK_NOTHROW(fbvp_transform(m, grow, 9.0, 0.0));
}

TEST_CASE("boundary bounds hold on sharp and non-sharp data") {
  std::vector<double> grid;
  for (int i = 0; i < 30; ++i) grid.push_back(1e-3 * std::pow(1e6, i / 29.0));
  const ModelParams m{0.7, 1.4, 0.9, 0.35};
  const auto sharp = verify_boundary_bounds(m, InitialDatum::exponential(0.8, 1.3), grid);
  CHECK(sharp.sharp_case);
  CHECK(sharp.ok);
  CHECK_FALSE(sharp.first_violation.has_value());
  const auto other = verify_boundary_bounds(m, InitialDatum::tabulated({0.0, 0.5, 2.0}, {0.2, 1.0, 0.1}, -1.0), grid);
  CHECK_FALSE(other.sharp_case);
  CHECK(other.ok);
  CHECK(other.checks.size() >= grid.size());
}
