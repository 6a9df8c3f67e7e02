#include "wentzell/specfun.hpp"

#include <atomic>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "wentzell/error.hpp"

namespace wentzell {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

std::atomic<double> g_series_perturbation{0.0};

struct Estimate {
  double value;
  double abs_error;
};

// Power series; abs_error is the cancellation estimate eps * max|term|.
Estimate ml_series(double alpha, double x) {
  const double lx = std::log(x);
  const double pert = g_series_perturbation.load(std::memory_order_relaxed);
  double sum = 0.0, comp = 0.0, max_term = 0.0;
  double prev_log = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const double log_mag = k * lx - boost::math::lgamma(alpha * k + 1.0);
    double mag = std::exp(log_mag);
    if (k >= 2) mag *= 1.0 + pert;
    const double term = (k % 2 == 1) ? -mag : mag;
    // Neumaier summation
    const double t = sum + term;
    comp += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    max_term = std::max(max_term, mag);
    if (k > 2 && log_mag < prev_log && mag <= 1e-18 * std::fabs(sum + comp)) break;
    prev_log = log_mag;
  }
  const double value = sum + comp;
  return {value, 4.0 * std::numeric_limits<double>::epsilon() * max_term};
}

// Large-x expansion sum_{k>=1} (-1)^{k+1} x^{-k} / Gamma(1 - alpha k), optimally truncated.
// The error estimate includes the exponentially small terms that the
// algebraic series omits.
Estimate ml_asymptotic(double alpha, double x) {
  double sum = 0.0;
  double last = std::numeric_limits<double>::infinity();
  double err = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    // 1/Gamma(1 - a k) = Gamma(a k) sin(pi a k) / pi
    const double ak = alpha * k;
    const double mag = std::exp(boost::math::lgamma(ak) - k * std::log(x)) / kPi;
    const double s = boost::math::sin_pi(ak);
    const double term = ((k % 2 == 1) ? 1.0 : -1.0) * mag * s;
    if (mag > last && k > 2) {
      err = last;
      break;
    }
    sum += term;
    last = mag;
    err = mag;
  }
  const double exp_part = (2.0 / alpha) * std::exp(std::pow(x, 1.0 / alpha) * std::cos(kPi / alpha));
  return {sum, err + exp_part};
}

// E_a(-x) = sin(a pi)/(a pi) int_0^inf exp(-(x w)^{1/a}) / (w^2 + 2 w cos(a pi) + 1) dw,
// written in v = x w and split at the near-pole v = x.
Estimate ml_integral(double alpha, double x) {
  const double phi = alpha * kPi;
  const double cphi = std::cos(phi);
  const double pref = std::sin(phi) / phi;
  const double p = 1.0 / alpha;
  auto g = [&](double v) {
    const double den = v * v + 2.0 * v * x * cphi + x * x;
    return x * std::exp(-std::pow(v, p)) / den;
  };
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  thread_local boost::math::quadrature::exp_sinh<double> es;
  double e1 = 0.0, e2 = 0.0;
  const double i1 = ts.integrate(g, 0.0, x, 1e-15, &e1);
  const double i2 = es.integrate(g, x, std::numeric_limits<double>::infinity(), 1e-15, &e2);
  return {pref * (i1 + i2), pref * (std::fabs(e1) + std::fabs(e2))};
}

}  // namespace

namespace testing {
void set_series_perturbation(double relative) { g_series_perturbation.store(relative); }
double series_perturbation() { return g_series_perturbation.load(); }
}  // namespace testing

double mittag_leffler_neg(double alpha, double x) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("mittag_leffler_neg: alpha must lie in (0,1], got " + std::to_string(alpha));
  if (!(x >= 0.0) || !std::isfinite(x))
    throw DomainError("mittag_leffler_neg: x must be finite and >= 0, got " + std::to_string(x));
  if (x == 0.0) return 1.0;
  if (alpha == 1.0) return std::exp(-x);

  constexpr double kTarget = 1e-14;
  // Sum of |terms| is about exp(x^{1/alpha}); skip the series when that alone rules it out.
  if (std::pow(x, 1.0 / alpha) < 30.0) {
    const Estimate s = ml_series(alpha, x);
    if (s.abs_error <= kTarget * std::fabs(s.value)) return s.value;
  }
  const Estimate a = ml_asymptotic(alpha, x);
  if (a.abs_error <= 0.1 * kTarget * std::fabs(a.value)) return a.value;
  const Estimate q = ml_integral(alpha, x);
  const Estimate& best = a.abs_error < q.abs_error ? a : q;
  if (!std::isfinite(best.value)) throw NumericError("mittag_leffler_neg: non-finite result");
  return best.value;
}

double gaussian_kernel(double t, double z) {
  if (!(t > 0.0)) throw DomainError("gaussian_kernel: t must be > 0");
  return std::exp(-z * z / (4.0 * t)) / std::sqrt(4.0 * kPi * t);
}

namespace {

void check_stable_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError(std::string(who) + ": alpha must lie in (0,1), got " + std::to_string(alpha));
}

// Density of H_1 through the Zolotarev/Kanter integral
// P(H_1 <= s) = (1/pi) int_0^pi exp(-s^{-a/(1-a)} A(phi)) dphi.
double standard_stable_density(double alpha, double s) {
  if (s <= 0.0) return 0.0;
  if (alpha == 0.5) return std::exp(-1.0 / (4.0 * s)) / (2.0 * std::sqrt(kPi) * std::pow(s, 1.5));
  const double b = 1.0 / (1.0 - alpha);
  const double scale = std::pow(s, -alpha * b);
  auto A = [&](double phi) {
    return std::pow(std::sin(alpha * phi) / std::sin(phi), b) * std::sin((1.0 - alpha) * phi) /
           std::sin(alpha * phi);
  };
  auto integrand = [&](double phi) {
    const double a = A(phi);
    const double e = scale * a;
    if (!std::isfinite(a) || !(e <= 745.0)) return 0.0;
    return a * std::exp(-e);
  };
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  const double integral = ts.integrate(integrand, 0.0, kPi, 1e-13);
  if (!(integral > 0.0)) return 0.0;
  return std::exp(std::log(alpha * b / kPi) - b * std::log(s) + std::log(integral));
}

}  // namespace

double stable_density_h(double alpha, double t, double s) {
  check_stable_alpha(alpha, "stable_density_h");
  if (!(t > 0.0)) throw DomainError("stable_density_h: t must be > 0");
  if (s <= 0.0) return 0.0;
  const double c = std::pow(t, -1.0 / alpha);
  return c * standard_stable_density(alpha, s * c);
}

double inverse_stable_density_l(double alpha, double t, double x) {
  check_stable_alpha(alpha, "inverse_stable_density_l");
  if (!(t > 0.0)) throw DomainError("inverse_stable_density_l: t must be > 0");
  if (x < 0.0) return 0.0;
  if (x == 0.0) return std::pow(t, -alpha) / boost::math::tgamma(1.0 - alpha);
  if (alpha == 0.5) return 2.0 * gaussian_kernel(t, x);
  if (std::fabs(alpha - 1.0 / 3.0) < 1e-15) {
    const double c = std::cbrt(3.0 * t);
    return 3.0 / c * boost::math::airy_ai(x / c);
  }
  const double z = x * std::pow(t, -alpha);
  if (z < 0.5) {
    // Wright series t^{-a} sum_k (-z)^k / (k! Gamma(1 - a(k+1)))
    double sum = 0.0, zk = 1.0;
    for (int k = 0; k < 60; ++k) {
      const double g = 1.0 - alpha * (k + 1);
      const double rg = g > 0.0 ? 1.0 / boost::math::tgamma(g)
                                : std::sin(kPi * g) * boost::math::tgamma(1.0 - g) / kPi;
      sum += zk * rg;
      // terms at poles of Gamma vanish, so stop on the size of z^k/k! Gamma(a(k+1)) instead
      if (k > 2 && std::fabs(zk) * boost::math::tgamma(alpha * (k + 1)) < 1e-17 * std::fabs(sum)) break;
      zk *= -z / (k + 1);
    }
    return std::pow(t, -alpha) * sum;
  }
  // P(L_t <= x) = P(H_1 >= t x^{-1/alpha})
  const double u = t * std::pow(x, -1.0 / alpha);
  const double d = standard_stable_density(alpha, u);
  if (!(d > 0.0)) return 0.0;
  return std::exp(std::log(t / alpha) - (1.0 + 1.0 / alpha) * std::log(x) + std::log(d));
}

}  // namespace wentzell
