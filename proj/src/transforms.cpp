#include "wentzell/transforms.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "wentzell/error.hpp"

namespace wentzell {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_lambda(double lambda, const char* who) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError(std::string(who) + ": lambda must be finite and > 0");
}

void check_x(double x, const char* who) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError(std::string(who) + ": x must be finite and >= 0");
}

}  // namespace

void ModelParams::validate_for_transforms() const {
  if (!(eta >= 0.0) || !(sigma >= 0.0) || !(c >= 0.0) || !std::isfinite(eta) || !std::isfinite(sigma) ||
      !std::isfinite(c))
    throw DomainError("model parameters eta, sigma, c must be finite and >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0,1]");
  if (eta == 0.0 && sigma == 0.0 && c == 0.0) throw DomainError("degenerate parameters: c = sigma = eta = 0");
}

void ModelParams::validate_for_paths() const {
  validate_for_transforms();
  if (!(sigma > 0.0)) throw DomainError("path simulation needs sigma > 0");
}

std::string ModelParams::describe() const {
  std::ostringstream s;
  s.precision(17);
  s << "eta=" << eta << ",sigma=" << sigma << ",c=" << c << ",alpha=" << alpha;
  return s.str();
}

namespace {

using Real = long double;

template <class T>
T cpow_t(T z, double a) {
  using std::exp, std::log;
  return exp(T(a) * log(z));
}

template <class T>
T dirichlet_impl(const InitialDatum& f, T lambda, double x) {
  using std::sqrt, std::exp;
  check_x(x, "dirichlet_potential");
  if (x == 0.0) return T(0);
  const T k = sqrt(lambda);
  return (two_sided_kernel_integral(f, k, x) - exp(-T(x) * k) * laplace_of_datum(f, k)) / (T(2) * k);
}

template <class T>
T fbvp_impl(const ModelParams& m, const InitialDatum& f, T lambda, double x) {
  using std::sqrt, std::exp;
  m.validate_for_transforms();
  check_x(x, "fbvp_transform");
  const T k = sqrt(lambda);
  const T la = m.alpha == 1.0 ? lambda : cpow_t(lambda, m.alpha);
  const T den = T(m.c) + T(m.eta) * la + T(m.sigma) * k;
  T num = T(m.eta) * (la / lambda) * T(f.at_zero());
  if (m.sigma != 0.0) num += T(m.sigma) * laplace_of_datum(f, k);
  T u = exp(-T(x) * k) * num / den;
  if (x > 0.0) u += dirichlet_impl(f, lambda, x);
  return u;
}

template <class T>
T sticky_impl(const ModelParams& m, const InitialDatum& f, T lambda, double x) {
  ModelParams classic = m;
  classic.alpha = 1.0;
  return fbvp_impl(classic, f, lambda, x);
}

template <class T>
T fivp_impl(const ModelParams& m, const InitialDatum& f, T lambda, double x) {
  m.validate_for_transforms();
  if (m.alpha == 1.0) return sticky_impl(m, f, lambda, x);
  const T mu = cpow_t(lambda, m.alpha);
  return (mu / lambda) * sticky_impl(m, f, mu, x);
}

template <class T>
T boundary_derivative_impl(const ModelParams& m, const InitialDatum& f, T lambda) {
  using std::sqrt;
  const T k = sqrt(lambda);
  return laplace_of_datum(f, k) - k * fbvp_impl(m, f, lambda, 0.0);
}

template <class T>
T second_derivative_impl(const ModelParams& m, const InitialDatum& f, T lambda, double x) {
  m.validate_for_transforms();
  const T mu = m.alpha == 1.0 ? lambda : cpow_t(lambda, m.alpha);
  return (mu / lambda) * (mu * sticky_impl(m, f, mu, x) - T(f(x)));
}

template <class T>
std::pair<T, T> occupation_impl(const ModelParams& m, T lambda) {
  using std::sqrt;
  m.validate_for_transforms();
  const T k = sqrt(lambda);
  const T la = m.alpha == 1.0 ? lambda : cpow_t(lambda, m.alpha);
  const T den = T(m.sigma) * k + T(m.eta) * la;
  return {(T(1) / lambda) * T(m.sigma) / (den * k), (T(1) / lambda) * (la / lambda) * T(m.eta) / den};
}

}  // namespace

Complex exp_weighted_integral(const InitialDatum& f, Complex lambda) {
  return laplace_of_datum(f, std::sqrt(lambda));
}

double exp_weighted_integral(const InitialDatum& f, double lambda) {
  check_lambda(lambda, "exp_weighted_integral");
  return exp_weighted_integral(f, Complex(lambda, 0.0)).real();
}

Complex dirichlet_potential(const InitialDatum& f, Complex lambda, double x) {
  return dirichlet_impl<Complex>(f, lambda, x);
}

double dirichlet_potential(const InitialDatum& f, double lambda, double x) {
  check_lambda(lambda, "dirichlet_potential");
  return dirichlet_potential(f, Complex(lambda, 0.0), x).real();
}

double dirichlet_potential_limit(const InitialDatum& f, double x) {
  check_x(x, "dirichlet_potential_limit");
  return green_min_integral(f, x);
}

Complex fbvp_transform(const ModelParams& m, const InitialDatum& f, Complex lambda, double x) {
  return fbvp_impl<Complex>(m, f, lambda, x);
}

double fbvp_transform(const ModelParams& m, const InitialDatum& f, double lambda, double x) {
  check_lambda(lambda, "fbvp_transform");
  return fbvp_transform(m, f, Complex(lambda, 0.0), x).real();
}

Complex sticky_resolvent(const ModelParams& m, const InitialDatum& f, Complex lambda, double x) {
  return sticky_impl<Complex>(m, f, lambda, x);
}

Complex fivp_transform(const ModelParams& m, const InitialDatum& f, Complex lambda, double x) {
  return fivp_impl<Complex>(m, f, lambda, x);
}

double fivp_transform(const ModelParams& m, const InitialDatum& f, double lambda, double x) {
  check_lambda(lambda, "fivp_transform");
  return fivp_transform(m, f, Complex(lambda, 0.0), x).real();
}

Complex boundary_derivative_transform(const ModelParams& m, const InitialDatum& f, Complex lambda) {
  return boundary_derivative_impl<Complex>(m, f, lambda);
}

double boundary_derivative_transform(const ModelParams& m, const InitialDatum& f, double lambda) {
  check_lambda(lambda, "boundary_derivative_transform");
  return boundary_derivative_transform(m, f, Complex(lambda, 0.0)).real();
}

Complex fivp_second_derivative_transform(const ModelParams& m, const InitialDatum& f, Complex lambda,
                                         double x) {
  return second_derivative_impl<Complex>(m, f, lambda, x);
}

OccupationTransforms occupation_transforms(const ModelParams& m, Complex lambda) {
  const auto [interior, boundary] = occupation_impl<Complex>(m, lambda);
  return {interior, boundary};
}

LaplaceFn fbvp_laplace(const ModelParams& m, const InitialDatum& f, double x) {
  m.validate_for_transforms();
  std::ostringstream d;
  d << "fbvp[" << m.describe() << "," << f.describe() << ",x=" << x << "]";
  return {[m, f, x](Complex l) { return fbvp_impl<Complex>(m, f, l, x); },
          [m, f, x](Real l) { return fbvp_impl<Real>(m, f, l, x); }, d.str()};
}

LaplaceFn fivp_laplace(const ModelParams& m, const InitialDatum& f, double x) {
  m.validate_for_transforms();
  std::ostringstream d;
  d << "fivp[" << m.describe() << "," << f.describe() << ",x=" << x << "]";
  return {[m, f, x](Complex l) { return fivp_impl<Complex>(m, f, l, x); },
          [m, f, x](Real l) { return fivp_impl<Real>(m, f, l, x); }, d.str()};
}

LaplaceFn boundary_derivative_laplace(const ModelParams& m, const InitialDatum& f) {
  m.validate_for_transforms();
  return {[m, f](Complex l) { return boundary_derivative_impl<Complex>(m, f, l); },
          [m, f](Real l) { return boundary_derivative_impl<Real>(m, f, l); },
          "boundary_derivative[" + m.describe() + "," + f.describe() + "]"};
}

LaplaceFn fivp_second_derivative_laplace(const ModelParams& m, const InitialDatum& f, double x) {
  m.validate_for_transforms();
  std::ostringstream d;
  d << "fivp_dxx[" << m.describe() << "," << f.describe() << ",x=" << x << "]";
  return {[m, f, x](Complex l) { return second_derivative_impl<Complex>(m, f, l, x); },
          [m, f, x](Real l) { return second_derivative_impl<Real>(m, f, l, x); }, d.str()};
}

LaplaceFn interior_occupation_laplace(const ModelParams& m) {
  m.validate_for_transforms();
  return {[m](Complex l) { return occupation_impl<Complex>(m, l).first; },
          [m](Real l) { return occupation_impl<Real>(m, l).first; }, "interior_occupation[" + m.describe() + "]"};
}

LaplaceFn boundary_occupation_laplace(const ModelParams& m) {
  m.validate_for_transforms();
  return {[m](Complex l) { return occupation_impl<Complex>(m, l).second; },
          [m](Real l) { return occupation_impl<Real>(m, l).second; }, "boundary_occupation[" + m.describe() + "]"};
}

LaplaceFn mittag_leffler_laplace(double alpha, double xi) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("mittag_leffler_laplace: alpha must lie in (0,1]");
  std::ostringstream d;
  d.precision(17);
  d << "mittag_leffler[alpha=" << alpha << ",xi=" << xi << "]";
  auto g = [alpha, xi](auto l) {
    using T = decltype(l);
    const T la = cpow_t(l, alpha);
    return la / l / (la + T(xi));
  };
  return {[g](Complex l) { return g(l); }, [g](Real l) { return g(l); }, d.str()};
}

double fbvp_boundary_limit(const ModelParams& m, const InitialDatum& f) {
  m.validate_for_transforms();
  if (m.c > 0.0) return 0.0;
  if (m.eta == 0.0) return f.limit_at_infinity();
  if (m.sigma == 0.0) return f.at_zero();
  if (m.alpha < 0.5) return f.at_zero();
  if (m.alpha > 0.5) return f.limit_at_infinity();
  return (m.sigma * f.limit_at_infinity() + m.eta * f.at_zero()) / (m.sigma + m.eta);
}

BoundsReport verify_boundary_bounds(const ModelParams& m, const InitialDatum& f,
                                    const std::vector<double>& lambda_grid) {
  m.validate_for_transforms();
  BoundsReport report;
  const double f0 = f.at_zero();
  const double norm = f.sup_norm();
  report.sharp_case = norm <= f0;

  auto add = [&](double lambda, const char* name, double lhs, double rhs) {
    const double tol = 1e-12 * (1.0 + std::fabs(lhs) + (std::isfinite(rhs) ? std::fabs(rhs) : 0.0));
    const bool holds = lhs <= rhs + tol;
    BoundCheck check{lambda, name, lhs, rhs, holds};
    report.checks.push_back(check);
    if (!holds && !report.first_violation) {
      report.first_violation = check;
      report.ok = false;
    }
  };

  // 0 * inf is 0 here: a vanishing coefficient makes the bound exact.
  auto scaled = [](double a, double s) { return a == 0.0 ? 0.0 : a * s; };

  for (double lambda : lambda_grid) {
    check_lambda(lambda, "verify_boundary_bounds");
    const double d = lambda * fbvp_transform(m, f, lambda, 0.0) - f0;
    const double la = std::pow(lambda, m.alpha);
    const double den = m.c + m.eta * la + m.sigma * std::sqrt(lambda);
    const double s = m.eta > 0.0 ? std::sqrt((m.c / m.eta) / la + (m.sigma / m.eta) * std::sqrt(lambda) / la) : kInf;
    if (report.sharp_case) {
      add(lambda, "sharp_upper", d, -f0 * m.c / den);
      add(lambda, "sharp_lower", scaled(-f0, s), d);
    } else {
      add(lambda, "middle_upper", d, scaled(0.5 * (norm - f0), s));
    }
    add(lambda, "modulus", std::fabs(d), scaled(norm, s));
  }
  add(0.0, "zero_limit", fbvp_boundary_limit(m, f) - f0, norm - f0);
  return report;
}

}  // namespace wentzell
