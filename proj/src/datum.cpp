#include "wentzell/datum.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "wentzell/error.hpp"

namespace wentzell {

using Complex = std::complex<double>;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Real = long double;

double real_part(Complex z) { return z.real(); }
Real real_part(Real z) { return z; }

// int_0^L (c0 + c1 v + c2 v^2) e^{-mu v} dv, L possibly infinite.
// T is std::complex<double> or long double.
template <class T>
T poly_exp_integral(T c0, T c1, T c2, T mu, double len) {
  using std::abs, std::exp;
  if (len == 0.0) return T(0);
  if (std::isinf(len)) {
    if (!(real_part(mu) > 0)) throw DivergenceError("datum integral diverges: kernel decay does not dominate growth");
    const T inv = T(1) / mu;
    return c0 * inv + c1 * inv * inv + T(2) * c2 * inv * inv * inv;
  }
  const T L = static_cast<T>(len);
  const T z = mu * L;
  T i0, i1, i2;
  if (abs(z) < 2) {
    // I_n = L^{n+1} sum_k (-z)^k / (k! (k + n + 1))
    T term = T(1);
    T s0 = T(0), s1 = T(0), s2 = T(0);
    for (int k = 0; k < 60; ++k) {
      s0 += term / T(k + 1);
      s1 += term / T(k + 2);
      s2 += term / T(k + 3);
      term *= -z / T(k + 1);
      if (abs(term) < 1e-21) break;
    }
    i0 = L * s0;
    i1 = L * L * s1;
    i2 = L * L * L * s2;
  } else {
    const T e = exp(-z);
    const T inv = T(1) / mu;
    i0 = (T(1) - e) * inv;
    i1 = (T(1) - e * (T(1) + z)) * inv * inv;
    i2 = (T(2) - e * (T(2) + T(2) * z + z * z)) * inv * inv * inv;
  }
  return c0 * i0 + c1 * i1 + c2 * i2;
}

bool segment_is_zero(const DatumSegment& s) { return s.p == 0.0 && s.q == 0.0; }

double segment_sup(const DatumSegment& s) {
  if (segment_is_zero(s)) return 0.0;
  const double len = s.b - s.a;
  auto h = [&](double v) { return std::fabs((s.p + s.q * v) * std::exp(-s.beta * v)); };
  if (std::isinf(len)) {
    if (s.beta < 0.0 || (s.beta == 0.0 && s.q != 0.0)) return kInf;
  }
  double m = h(0.0);
  if (!std::isinf(len)) m = std::max(m, h(len));
  if (s.q != 0.0 && s.beta != 0.0) {
    const double v = 1.0 / s.beta - s.p / s.q;
    if (v > 0.0 && v < len) m = std::max(m, h(v));
  }
  return m;
}

}  // namespace

InitialDatum InitialDatum::constant(double value) {
  if (!std::isfinite(value)) throw DomainError("constant datum must be finite");
  return InitialDatum(DatumKind::constant, value, {{0.0, kInf, value, 0.0, 0.0}}, value);
}

InitialDatum InitialDatum::indicator_interval(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("indicator epsilon must be finite and > 0");
  return InitialDatum(DatumKind::indicator_interval, 1.0, {{0.0, epsilon, 1.0, 0.0, 0.0}}, epsilon);
}

InitialDatum InitialDatum::indicator_positive() {
  return InitialDatum(DatumKind::indicator_positive, 0.0, {{0.0, kInf, 1.0, 0.0, 0.0}}, 0.0);
}

InitialDatum InitialDatum::exponential(double beta, double amplitude) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("exponential datum needs finite beta >= 0");
  if (!std::isfinite(amplitude)) throw DomainError("exponential amplitude must be finite");
  return InitialDatum(DatumKind::exponential, amplitude, {{0.0, kInf, amplitude, 0.0, beta}}, beta);
}

InitialDatum InitialDatum::point_mass(double weight) {
  if (!std::isfinite(weight)) throw DomainError("point mass weight must be finite");
  return InitialDatum(DatumKind::point_mass, weight, {}, weight);
}

InitialDatum InitialDatum::tabulated(std::vector<double> y, std::vector<double> f, double tail_rate) {
  if (y.empty() || y.size() != f.size()) throw DomainError("tabulated datum needs matching, non-empty node lists");
  if (y.front() != 0.0) throw DomainError("tabulated datum must start at y = 0");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i]) || !std::isfinite(f[i])) throw DomainError("tabulated datum values must be finite");
    if (i > 0 && !(y[i] > y[i - 1])) throw DomainError("tabulated nodes must be strictly increasing");
  }
  if (!std::isfinite(tail_rate)) throw DomainError("tail rate must be finite");
  std::vector<DatumSegment> segs;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    segs.push_back({y[i], y[i + 1], f[i], (f[i + 1] - f[i]) / (y[i + 1] - y[i]), 0.0});
  }
  segs.push_back({y.back(), kInf, f.back(), 0.0, -tail_rate});
  return InitialDatum(DatumKind::tabulated, f.front(), std::move(segs), tail_rate);
}

std::string InitialDatum::describe() const {
  std::ostringstream s;
  s.precision(17);
  switch (kind_) {
    case DatumKind::constant: s << "constant(" << param_ << ")"; break;
    case DatumKind::indicator_interval: s << "indicator[0," << param_ << "]"; break;
    case DatumKind::indicator_positive: s << "indicator(0,inf)"; break;
    case DatumKind::exponential: s << "exponential(beta=" << param_ << ",amplitude=" << f0_ << ")"; break;
    case DatumKind::point_mass: s << "point_mass(" << param_ << ")"; break;
    case DatumKind::tabulated: s << "tabulated(nodes=" << segments_.size() << ",tail_rate=" << param_ << ")"; break;
  }
  return s.str();
}

double InitialDatum::operator()(double y) const {
  if (!(y >= 0.0)) throw DomainError("datum evaluated at negative or NaN y");
  if (y == 0.0) return f0_;
  if (kind_ == DatumKind::indicator_interval) return y <= param_ ? 1.0 : 0.0;
  for (const auto& s : segments_) {
    if (y >= s.a && y < s.b) {
      const double v = y - s.a;
      return (s.p + s.q * v) * std::exp(-s.beta * v);
    }
  }
  return 0.0;
}

double InitialDatum::sup_norm() const {
  double m = std::fabs(f0_);
  for (const auto& s : segments_) m = std::max(m, segment_sup(s));
  return m;
}

double InitialDatum::limit_at_infinity() const {
  for (const auto& s : segments_) {
    if (!std::isinf(s.b) || segment_is_zero(s)) continue;
    if (s.beta > 0.0) return 0.0;
    if (s.beta == 0.0 && s.q == 0.0) return s.p;
    throw DomainError("datum " + describe() + " has no finite limit at infinity");
  }
  return 0.0;
}

double InitialDatum::growth_rate() const {
  double g = -kInf;
  for (const auto& s : segments_)
    if (std::isinf(s.b) && !segment_is_zero(s)) g = std::max(g, -s.beta);
  return g;
}

namespace {

template <class T>
T laplace_impl(const InitialDatum& f, T k) {
  using std::exp;
  T total = T(0);
  for (const auto& s : f.segments()) {
    if (segment_is_zero(s)) continue;
    total += exp(-k * T(s.a)) * poly_exp_integral<T>(T(s.p), T(s.q), T(0), T(s.beta) + k, s.b - s.a);
  }
  return total;
}

template <class T>
T two_sided_impl(const InitialDatum& f, T k, double x) {
  using std::exp;
  if (!(x >= 0.0)) throw DomainError("two_sided_kernel_integral: x must be >= 0");
  T total = T(0);
  for (const auto& s : f.segments()) {
    if (segment_is_zero(s)) continue;
    if (s.b > x) {
      const double a1 = std::max(s.a, x);
      const double d = a1 - s.a;
      const Real decay = std::exp(-Real(s.beta) * d);
      const T p1 = T((s.p + s.q * Real(d)) * decay);
      const T q1 = T(s.q * decay);
      total += exp(-T(a1 - x) * k) * poly_exp_integral<T>(p1, q1, T(0), T(s.beta) + k, s.b - a1);
    }
    if (s.a < x) {
      const double b1 = std::min(s.b, x);
      const double d = b1 - s.a;
      const Real decay = std::exp(-Real(s.beta) * d);
      const T p1 = T((s.p + s.q * Real(d)) * decay);
      const T q1 = T(-s.q * decay);
      total += exp(-T(x - b1) * k) * poly_exp_integral<T>(p1, q1, T(0), k - T(s.beta), d);
    }
  }
  return total;
}

}  // namespace

Complex laplace_of_datum(const InitialDatum& f, Complex k) { return laplace_impl<Complex>(f, k); }
long double laplace_of_datum(const InitialDatum& f, long double k) { return laplace_impl<Real>(f, k); }

Complex two_sided_kernel_integral(const InitialDatum& f, Complex k, double x) {
  return two_sided_impl<Complex>(f, k, x);
}
long double two_sided_kernel_integral(const InitialDatum& f, long double k, double x) {
  return two_sided_impl<Real>(f, k, x);
}

double green_min_integral(const InitialDatum& f, double x) {
  if (!(x >= 0.0)) throw DomainError("green_min_integral: x must be >= 0");
  if (x == 0.0) return 0.0;
  Complex total = 0.0;
  for (const auto& s : f.segments()) {
    if (segment_is_zero(s)) continue;
    if (s.a < x) {
      // y f(y) = (a + v)(p + q v) e^{-beta v}
      const double len = std::min(s.b, x) - s.a;
      total += poly_exp_integral<Complex>(s.a * s.p, s.a * s.q + s.p, s.q, s.beta, len);
    }
    if (s.b > x) {
      const double a1 = std::max(s.a, x);
      const double d = a1 - s.a;
      const double decay = std::exp(-s.beta * d);
      total += x * poly_exp_integral<Complex>((s.p + s.q * d) * decay, s.q * decay, 0.0, s.beta, s.b - a1);
    }
  }
  return total.real();
}

}  // namespace wentzell
