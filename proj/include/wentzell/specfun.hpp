#pragma once
// Mittag-Leffler function on the negative axis, Gaussian kernel and the
// densities of the alpha-stable subordinator and its inverse.

namespace wentzell {

// E_alpha(-x) for alpha in (0,1], x >= 0.
// Laplace pair: int_0^inf e^{-lt} E_alpha(-xi t^alpha) dt = l^{alpha-1} / (l^alpha + xi).
double mittag_leffler_neg(double alpha, double x);

// exp(-z^2 / (4t)) / sqrt(4 pi t), the kernel of d^2/dx^2.
double gaussian_kernel(double t, double z);

// Density h(t, s) of H_t where E exp(-l H_t) = exp(-t l^alpha), alpha in (0,1).
double stable_density_h(double alpha, double t, double s);

// Density l(t, x) of the inverse subordinator L_t = inf{x : H_x > t}, alpha in (0,1).
// Satisfies int_0^inf e^{-lt} l(t,x) dt = l^{alpha-1} exp(-x l^alpha).
double inverse_stable_density_l(double alpha, double t, double x);

namespace testing {
// Relative perturbation applied to every power-series term of index >= 2.
// Zero in normal use; nonzero values exist only to check that the verification
// suite notices a corrupted series.
void set_series_perturbation(double relative);
double series_perturbation();
}  // namespace testing

}  // namespace wentzell
