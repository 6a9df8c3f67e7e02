#pragma once
// Caputo derivative (L1 scheme) and residual checks of the fractional
// boundary condition on inverted transforms.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "wentzell/datum.hpp"
#include "wentzell/transforms.hpp"

namespace wentzell {

// kappa(z) = z^{-alpha} / Gamma(1 - alpha), alpha in (0,1).
double caputo_kernel(double alpha, double z);

struct CaputoKernel {
  double alpha;
  std::vector<double> z;
  std::vector<double> values;
};
// kappa on z_j = j * dz, j = 1..n.
CaputoKernel caputo_kernel_grid(double alpha, double dz, std::size_t n);

// int_0^inf e^{-l z} kappa(z) dz by quadrature (exact value l^{alpha-1}).
double caputo_kernel_laplace(double alpha, double lambda);

struct TimeSeries {
  double dt;
  std::vector<double> values;  // u(j dt), values[0] is the initial value
};

// L1 approximation of the Caputo derivative at t = at * dt:
// dt^{-a} / Gamma(2-a) * sum_{j<at} b_j (u_{at-j} - u_{at-j-1}),
// b_j = (j+1)^{1-a} - j^{1-a}. alpha = 1 gives the backward difference.
double caputo_l1(const TimeSeries& u, double alpha, std::size_t at);

struct ResidualPoint {
  double t;
  double value;       // u(t,0)
  double derivative;  // D^alpha_t u(t,0)
  double space_derivative;  // u'(t,0)
  double residual;    // eta D^alpha u - sigma u' + c u
};

// u(.,0) and u'(.,0) from Talbot inversion. The time derivative uses the L1
// scheme on the grid j*dt for alpha < 1 and a fourth-order central difference
// for alpha = 1. Each t must be a multiple of dt (and >= 2 dt when alpha = 1).
std::vector<ResidualPoint> fbvp_residual(const ModelParams& m, const InitialDatum& f,
                                         std::span<const double> t_grid, double dt);

struct ProbePoint {
  double x;
  double derivative;         // D^alpha_t v(t,x)
  double second_derivative;  // v''(t,x)
  double gap;
};

// D^alpha_t v - v'' along a sequence x -> 0 for the fivp solution v.
std::vector<ProbePoint> assumption_a1_probe(const ModelParams& m, const InitialDatum& f, double t,
                                            std::span<const double> x_sequence, double dt);

struct PowerFit {
  double exponent;   // p in |du/dt (t,0)| ~ A t^{p-1}
  double amplitude;  // A
  double rms_log_residual;
};

// Least-squares fit of log|du/dt(t,0)| on log t over [t_lo, t_hi] (n log-spaced points).
PowerFit fit_boundary_derivative_growth(const ModelParams& m, const InitialDatum& f, double t_lo = 0.05,
                                        double t_hi = 1.0, std::size_t n = 20);

// "t,residual"
void write_residual_csv(std::ostream& out, std::span<const ResidualPoint> r);

}  // namespace wentzell
