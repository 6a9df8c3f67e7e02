#include "wentzell/fracdiff.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "wentzell/error.hpp"
#include "wentzell/inversion.hpp"

namespace wentzell {

namespace {

void check_alpha_open(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
}

std::size_t grid_index(double t, double dt) {
  const double r = t / dt;
  const double k = std::round(r);
  if (!(t > 0.0) || std::fabs(r - k) > 1e-6) throw DomainError("time points must be positive multiples of dt");
  return static_cast<std::size_t>(k);
}

TimeSeries invert_series(const LaplaceFn& F, double initial, double dt, std::size_t n) {
  TimeSeries s{dt, std::vector<double>(n + 1)};
  s.values[0] = initial;
  for (std::size_t j = 1; j <= n; ++j) s.values[j] = invert_talbot(F, static_cast<double>(j) * dt);
  return s;
}

double central_derivative(const LaplaceFn& F, double t, double h) {
  const double up2 = invert_talbot(F, t + 2.0 * h), up1 = invert_talbot(F, t + h);
  const double dn1 = invert_talbot(F, t - h), dn2 = invert_talbot(F, t - 2.0 * h);
  return (-up2 + 8.0 * up1 - 8.0 * dn1 + dn2) / (12.0 * h);
}

// d/dt through the transform: l F(l) - F(inf) with the given initial value.
LaplaceFn time_derivative_laplace(const LaplaceFn& F, double initial) {
  return {[F, initial](Complex l) { return l * F(l) - initial; },
          [F, initial](long double l) { return l * F.real_axis(l) - initial; }, "d/dt " + F.description};
}

}  // namespace

double caputo_kernel(double alpha, double z) {
  check_alpha_open(alpha);
  if (!(z > 0.0)) throw DomainError("caputo_kernel: z must be > 0");
  return std::pow(z, -alpha) / boost::math::tgamma(1.0 - alpha);
}

CaputoKernel caputo_kernel_grid(double alpha, double dz, std::size_t n) {
  check_alpha_open(alpha);
  if (!(dz > 0.0)) throw DomainError("caputo_kernel_grid: dz must be > 0");
  CaputoKernel k{alpha, {}, {}};
  k.z.reserve(n);
  k.values.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) {
    const double z = static_cast<double>(j) * dz;
    k.z.push_back(z);
    k.values.push_back(caputo_kernel(alpha, z));
  }
  return k;
}

double caputo_kernel_laplace(double alpha, double lambda) {
  check_alpha_open(alpha);
  if (!(lambda > 0.0)) throw DomainError("caputo_kernel_laplace: lambda must be > 0");
  boost::math::quadrature::exp_sinh<double> integrator;
  const double g = boost::math::tgamma(1.0 - alpha);
  return integrator.integrate([&](double z) { return std::exp(-lambda * z) * std::pow(z, -alpha) / g; }, 0.0,
                              std::numeric_limits<double>::infinity());
}

double caputo_l1(const TimeSeries& u, double alpha, std::size_t at) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0,1]");
  if (at == 0) throw DomainError("caputo_l1: index must be >= 1");
  if (at >= u.values.size()) throw DomainError("caputo_l1: index beyond series");
  if (!(u.dt > 0.0)) throw DomainError("caputo_l1: dt must be > 0");
  const double e = 1.0 - alpha;
  double acc = 0.0;
  double prev_pow = 0.0;  // j^{1-alpha}, with 0^{1-alpha} taken as 0
  for (std::size_t j = 0; j < at; ++j) {
    const double next_pow = std::pow(static_cast<double>(j + 1), e);
    const double b = next_pow - prev_pow;
    prev_pow = next_pow;
    if (b == 0.0) break;
    acc += b * (u.values[at - j] - u.values[at - j - 1]);
  }
  return acc * std::pow(u.dt, -alpha) / boost::math::tgamma(2.0 - alpha);
}

std::vector<ResidualPoint> fbvp_residual(const ModelParams& m, const InitialDatum& f,
                                         std::span<const double> t_grid, double dt) {
  m.validate_for_transforms();
  if (!(dt > 0.0)) throw DomainError("fbvp_residual: dt must be > 0");
  const LaplaceFn U = fbvp_laplace(m, f, 0.0);
  const LaplaceFn dU = boundary_derivative_laplace(m, f);
  std::vector<ResidualPoint> out;
  TimeSeries series{dt, {}};
  if (m.alpha < 1.0) {
    std::size_t n = 0;
    for (double t : t_grid) n = std::max(n, grid_index(t, dt));
    series = invert_series(U, f.at_zero(), dt, n);
  }
  for (double t : t_grid) {
    const std::size_t k = grid_index(t, dt);
    ResidualPoint p;
    p.t = t;
    if (m.alpha < 1.0) {
      p.value = series.values[k];
      p.derivative = caputo_l1(series, m.alpha, k);
    } else {
      if (k < 2) throw DomainError("fbvp_residual: alpha = 1 needs t >= 2 dt");
      p.value = invert_talbot(U, t);
      p.derivative = central_derivative(U, t, dt);
    }
    p.space_derivative = invert_talbot(dU, t);
    p.residual = m.eta * p.derivative - m.sigma * p.space_derivative + m.c * p.value;
    out.push_back(p);
  }
  return out;
}

std::vector<ProbePoint> assumption_a1_probe(const ModelParams& m, const InitialDatum& f, double t,
                                            std::span<const double> x_sequence, double dt) {
  m.validate_for_transforms();
  const std::size_t k = grid_index(t, dt);
  std::vector<ProbePoint> out;
  for (double x : x_sequence) {
    if (!(x > 0.0)) throw DomainError("assumption_a1_probe: x must be > 0");
    const LaplaceFn V = fivp_laplace(m, f, x);
    ProbePoint p;
    p.x = x;
    if (m.alpha < 1.0) {
      p.derivative = caputo_l1(invert_series(V, f(x), dt, k), m.alpha, k);
    } else {
      if (k < 2) throw DomainError("assumption_a1_probe: alpha = 1 needs t >= 2 dt");
      p.derivative = central_derivative(V, t, dt);
    }
    p.second_derivative = invert_talbot(fivp_second_derivative_laplace(m, f, x), t);
    p.gap = p.derivative - p.second_derivative;
    out.push_back(p);
  }
  return out;
}

PowerFit fit_boundary_derivative_growth(const ModelParams& m, const InitialDatum& f, double t_lo, double t_hi,
                                        std::size_t n) {
  if (!(t_lo > 0.0 && t_hi > t_lo) || n < 3) throw DomainError("fit_boundary_derivative_growth: bad range");
  const LaplaceFn D = time_derivative_laplace(fbvp_laplace(m, f, 0.0), f.at_zero());
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / static_cast<double>(n - 1));
    const double d = std::fabs(invert_talbot(D, t));
    if (d == 0.0) continue;
    lx.push_back(std::log(t));
    ly.push_back(std::log(d));
  }
  if (lx.size() < 3) return {1.0, 0.0, 0.0};  // derivative vanishes: bounded, integrable
  const double nn = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / nn;
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (icpt + slope * lx[i]);
    ss += r * r;
  }
  return {slope + 1.0, std::exp(icpt), std::sqrt(ss / nn)};
}

void write_residual_csv(std::ostream& out, std::span<const ResidualPoint> r) {
  const auto old = out.precision(17);
  out << "t,residual\n";
  for (const auto& p : r) out << p.t << ',' << p.residual << '\n';
  out.precision(old);
}

}  // namespace wentzell
