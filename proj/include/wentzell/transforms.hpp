#pragma once
// Closed-form Laplace transforms for Brownian motion on [0, inf) with the
// boundary condition  eta D^alpha_t u(t,0) = sigma u'(t,0) - c u(t,0)
// (generator d^2/dx^2, so the driving Brownian motion has variance 2t).

#include <optional>
#include <string>
#include <vector>

#include "wentzell/datum.hpp"
#include "wentzell/inversion.hpp"

namespace wentzell {

struct ModelParams {
  double eta = 0.0;    // stickiness
  double sigma = 1.0;  // reflection weight
  double c = 0.0;      // elastic rate
  double alpha = 1.0;  // fractional order

  // Transform evaluation tolerates sigma == 0 but not c = sigma = eta = 0.
  void validate_for_transforms() const;
  // Path simulation additionally needs sigma > 0.
  void validate_for_paths() const;
  std::string describe() const;
};

// int_0^inf e^{-y sqrt(lambda)} f(y) dy.
Complex exp_weighted_integral(const InitialDatum& f, Complex lambda);
double exp_weighted_integral(const InitialDatum& f, double lambda);

// Potential of the heat semigroup killed at 0:
// (1/(2 sqrt l)) int (e^{-|x-y| sqrt l} - e^{-(x+y) sqrt l}) f(y) dy.
Complex dirichlet_potential(const InitialDatum& f, Complex lambda, double x);
double dirichlet_potential(const InitialDatum& f, double lambda, double x);
// lambda -> 0 limit, int_0^inf min(x, y) f(y) dy, evaluated symbolically.
double dirichlet_potential_limit(const InitialDatum& f, double x);

// Transform in t of u(t, x) solving the fractional boundary value problem.
Complex fbvp_transform(const ModelParams& m, const InitialDatum& f, Complex lambda, double x);
double fbvp_transform(const ModelParams& m, const InitialDatum& f, double lambda, double x);

// Resolvent of the sticky elastic Brownian motion (alpha ignored).
Complex sticky_resolvent(const ModelParams& m, const InitialDatum& f, Complex lambda, double x);

// lambda^{alpha-1} R_{lambda^alpha} f(x): transform of v(t,x) = E_x f(X o L_t).
Complex fivp_transform(const ModelParams& m, const InitialDatum& f, Complex lambda, double x);
double fivp_transform(const ModelParams& m, const InitialDatum& f, double lambda, double x);

// d/dx of the fbvp transform at x = 0: F0(sqrt l) - sqrt(l) u~(l, 0).
Complex boundary_derivative_transform(const ModelParams& m, const InitialDatum& f, Complex lambda);
double boundary_derivative_transform(const ModelParams& m, const InitialDatum& f, double lambda);

// Transform of v''(t,x) for the fivp solution: l^{a-1} (mu R_mu f(x) - f(x)) with mu = l^a, x > 0.
Complex fivp_second_derivative_transform(const ModelParams& m, const InitialDatum& f, Complex lambda, double x);

// Expected occupation times up to t (c = 0, start at 0), transformed in t.
struct OccupationTransforms {
  Complex interior;
  Complex boundary;
};
OccupationTransforms occupation_transforms(const ModelParams& m, Complex lambda);

// LaplaceFn wrappers.
LaplaceFn fbvp_laplace(const ModelParams& m, const InitialDatum& f, double x);
LaplaceFn fivp_laplace(const ModelParams& m, const InitialDatum& f, double x);
LaplaceFn boundary_derivative_laplace(const ModelParams& m, const InitialDatum& f);
LaplaceFn fivp_second_derivative_laplace(const ModelParams& m, const InitialDatum& f, double x);
LaplaceFn interior_occupation_laplace(const ModelParams& m);
LaplaceFn boundary_occupation_laplace(const ModelParams& m);
// l^{alpha-1} / (l^alpha + xi), the transform of E_alpha(-xi t^alpha).
LaplaceFn mittag_leffler_laplace(double alpha, double xi);

// lim_{l -> 0} l u~(l, 0), evaluated symbolically.
double fbvp_boundary_limit(const ModelParams& m, const InitialDatum& f);

struct BoundCheck {
  double lambda;  // 0 marks the lambda -> 0 limit check
  std::string inequality;
  double lhs;
  double rhs;
  bool holds;
};

struct BoundsReport {
  bool ok = true;
  bool sharp_case = false;  // sup |f| == f(0)
  std::vector<BoundCheck> checks;
  std::optional<BoundCheck> first_violation;
};

// Checks the boundary estimates for l u~(l,0) - f(0) on every grid point:
//  sharp case (sup|f| = f(0)):  <= -f(0) c / (c + eta l^a + sigma sqrt l)  and  >= -f(0) S(l);
//  otherwise:                   <= (sup|f| - f(0)) S(l) / 2;
//  always:                      |.| <= sup|f| S(l),  and the l -> 0 limit is <= sup|f| - f(0),
// with S(l) = sqrt((c/eta) l^{-a} + (sigma/eta) l^{1/2-a}).
BoundsReport verify_boundary_bounds(const ModelParams& m, const InitialDatum& f,
                                    const std::vector<double>& lambda_grid);

}  // namespace wentzell
