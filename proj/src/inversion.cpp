#include "wentzell/inversion.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "wentzell/error.hpp"

namespace wentzell {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_time(double t, const char* who) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError(std::string(who) + ": t must be finite and > 0");
}

// V_k for k = 1..N, computed in long double.
std::vector<long double> stehfest_weights(int n) {
  const int half = n / 2;
  auto fact = [](int m) {
    long double r = 1.0L;
    for (int i = 2; i <= m; ++i) r *= i;
    return r;
  };
  std::vector<long double> v(n + 1, 0.0L);
  for (int k = 1; k <= n; ++k) {
    long double s = 0.0L;
    for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
      s += std::pow(static_cast<long double>(j), half) * fact(2 * j) /
           (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
    }
    const int sign = ((k + half) % 2 == 0) ? 1 : -1;
    v[k] = sign * s;
  }
  return v;
}

constexpr int kMaxTermsExtended = 24;

const std::vector<long double>& cached_weights(int n) {
  static const std::array<std::vector<long double>, kMaxTermsExtended / 2 + 1> table = [] {
    std::array<std::vector<long double>, kMaxTermsExtended / 2 + 1> t;
    for (int i = 1; i <= kMaxTermsExtended / 2; ++i) t[i] = stehfest_weights(2 * i);
    return t;
  }();
  return table[n / 2];
}

}  // namespace

double invert_talbot(const LaplaceFn& F, double t, int nodes) {
  check_time(t, "invert_talbot");
  if (nodes < 2) throw DomainError("invert_talbot: nodes must be >= 2");
  const double m = nodes;
  const double r = 2.0 * m / (5.0 * t);
  double acc = 0.5 * F(Complex(r, 0.0)).real() * std::exp(r * t);
  for (int k = 1; k < nodes; ++k) {
    const double theta = k * kPi / m;
    const double cot = std::cos(theta) / std::sin(theta);
    const Complex s(r * theta * cot, r * theta);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    const Complex term = std::exp(t * s) * F(s) * Complex(1.0, sigma);
    acc += term.real();
  }
  const double value = r / m * acc;
  if (!std::isfinite(value)) throw InversionError("invert_talbot: non-finite result for " + F.description);
  return value;
}

double invert_gaver_stehfest(const LaplaceFn& F, double t, int terms) {
  check_time(t, "invert_gaver_stehfest");
  if (terms == 0) terms = F.real_fn ? kStehfestTermsExtended : kStehfestTermsDouble;
  if (terms < 2 || terms % 2 != 0) throw DomainError("invert_gaver_stehfest: terms must be even and >= 2");
  const int limit = F.real_fn ? kMaxTermsExtended : 18;
  if (terms > limit)
    throw DomainError("invert_gaver_stehfest: more than " + std::to_string(limit) +
                      " terms loses all precision for this transform");
  const auto& v = cached_weights(terms);
  const long double a = std::log(2.0L) / t;
  long double acc = 0.0L;
  for (int k = 1; k <= terms; ++k) acc += v[k] * F.real_axis(k * a);
  const double value = static_cast<double>(a * acc);
  if (!std::isfinite(value))
    throw InversionError("invert_gaver_stehfest: non-finite result for " + F.description);
  return value;
}

CheckedInverse invert_checked(const LaplaceFn& F, double t, double rel_tol, double abs_floor) {
  const double tv = invert_talbot(F, t);
  const double gv = invert_gaver_stehfest(F, t);
  const double diff = std::fabs(tv - gv);
  if (!(diff <= rel_tol * std::max(std::fabs(tv), abs_floor))) {
    std::ostringstream msg;
    msg << std::setprecision(10) << "inversion disagreement for " << F.description << " at t=" << t
        << ": talbot=" << tv << " stehfest=" << gv;
    throw InversionError(msg.str());
  }
  return {tv, gv, diff};
}

std::vector<double> invert_talbot_grid(const LaplaceFn& F, std::span<const double> ts, int nodes) {
  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back(invert_talbot(F, t, nodes));
  return out;
}

void write_transform_csv(std::ostream& out, const LaplaceFn& F, std::span<const double> lambdas) {
  out << "lambda,value\n" << std::setprecision(17);
  for (double l : lambdas) out << l << ',' << F(l) << '\n';
}

void write_inverse_csv(std::ostream& out, const LaplaceFn& F, std::span<const double> ts) {
  out << "t,inverted_value\n" << std::setprecision(17);
  for (double t : ts) out << t << ',' << invert_talbot(F, t) << '\n';
}

}  // namespace wentzell
