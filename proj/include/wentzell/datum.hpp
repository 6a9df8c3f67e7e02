#pragma once
// Initial data f on [0, inf) as piecewise (p + q (y-a)) e^{-beta (y-a)} segments,
// with the value at 0 stored separately so that indicators of (0, inf) and
// point masses at the boundary are representable.

#include <complex>
#include <string>
#include <vector>

namespace wentzell {

enum class DatumKind { constant, indicator_interval, indicator_positive, exponential, point_mass, tabulated };

// f(y) = (p + q (y - a)) exp(-beta (y - a)) on [a, b); b may be +inf.
struct DatumSegment {
  double a, b;
  double p, q, beta;
};

class InitialDatum {
 public:
  static InitialDatum constant(double value);
  // 1 on [0, epsilon].
  static InitialDatum indicator_interval(double epsilon);
  // 1 on (0, inf), 0 at the boundary point.
  static InitialDatum indicator_positive();
  // amplitude * exp(-beta y), beta >= 0.
  static InitialDatum exponential(double beta, double amplitude = 1.0);
  // weight at y = 0, zero elsewhere.
  static InitialDatum point_mass(double weight = 1.0);
  // Piecewise linear through (y_i, f_i) with y_0 = 0 and y strictly increasing.
  // Beyond the last node f(y) = f_n exp(tail_rate (y - y_n)).
  static InitialDatum tabulated(std::vector<double> y, std::vector<double> f, double tail_rate = 0.0);

  DatumKind kind() const { return kind_; }
  std::string describe() const;

  double operator()(double y) const;
  double at_zero() const { return f0_; }
  // sup |f| over [0, inf); +inf for a growing tail.
  double sup_norm() const;
  // lim_{y -> inf} f(y); throws DomainError for a growing tail.
  double limit_at_infinity() const;
  // Largest exponential growth rate of the tail (<= 0 means no growth).
  double growth_rate() const;

  const std::vector<DatumSegment>& segments() const { return segments_; }
  double parameter() const { return param_; }

 private:
  InitialDatum(DatumKind kind, double f0, std::vector<DatumSegment> segs, double param)
      : kind_(kind), f0_(f0), segments_(std::move(segs)), param_(param) {}

  DatumKind kind_;
  double f0_;
  std::vector<DatumSegment> segments_;
  double param_;
};

// int_0^inf e^{-k y} f(y) dy; throws DivergenceError if Re k <= growth rate.
std::complex<double> laplace_of_datum(const InitialDatum& f, std::complex<double> k);
long double laplace_of_datum(const InitialDatum& f, long double k);
// int_0^inf e^{-|x - y| k} f(y) dy for x >= 0.
std::complex<double> two_sided_kernel_integral(const InitialDatum& f, std::complex<double> k, double x);
long double two_sided_kernel_integral(const InitialDatum& f, long double k, double x);
// int_0^inf min(x, y) f(y) dy; throws DivergenceError unless f is integrable at infinity.
double green_min_integral(const InitialDatum& f, double x);

}  // namespace wentzell
