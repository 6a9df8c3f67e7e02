#pragma once
// Laplace-transform objects and numerical inversion.

#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wentzell {

using Complex = std::complex<double>;

// lambda -> F(lambda) on Re lambda > 0, principal branch for sqrt and powers.
// Immutable after construction; safe to evaluate concurrently if fn is.
struct LaplaceFn {
  std::function<Complex(Complex)> fn;
  // Optional extended-precision evaluation on the positive real axis, used by
  // Gaver-Stehfest whose weights amplify rounding errors in F.
  std::function<long double(long double)> real_fn;
  std::string description;

  LaplaceFn() = default;
  LaplaceFn(std::function<Complex(Complex)> f, std::string desc) : fn(std::move(f)), description(std::move(desc)) {}
  LaplaceFn(std::function<Complex(Complex)> f, std::function<long double(long double)> rf, std::string desc)
      : fn(std::move(f)), real_fn(std::move(rf)), description(std::move(desc)) {}

  Complex operator()(Complex lambda) const { return fn(lambda); }
  double operator()(double lambda) const { return fn(Complex(lambda, 0.0)).real(); }
  long double real_axis(long double lambda) const {
    return real_fn ? real_fn(lambda) : static_cast<long double>(fn(Complex(static_cast<double>(lambda), 0.0)).real());
  }
};

inline constexpr int kTalbotNodes = 32;
// Default Gaver-Stehfest term counts: with and without extended-precision real_fn.
inline constexpr int kStehfestTermsExtended = 20;
inline constexpr int kStehfestTermsDouble = 16;

// Fixed Talbot contour (Abate-Valko), nodes >= 2.
double invert_talbot(const LaplaceFn& F, double t, int nodes = kTalbotNodes);
// Gaver-Stehfest on the real axis. terms must be even: at most 18 when F has
// only a double evaluator, at most 24 with real_fn; 0 picks the default.
double invert_gaver_stehfest(const LaplaceFn& F, double t, int terms = 0);

struct CheckedInverse {
  double value;      // Talbot
  double stehfest;   // cross-check
  double discrepancy;
};

// Talbot value checked against Gaver-Stehfest: throws InversionError unless
// |T - G| <= rel_tol * max(|T|, abs_floor).
CheckedInverse invert_checked(const LaplaceFn& F, double t, double rel_tol = 1e-6,
                              double abs_floor = 1e-12);

std::vector<double> invert_talbot_grid(const LaplaceFn& F, std::span<const double> ts,
                                       int nodes = kTalbotNodes);

// CSV exports: "lambda,value" and "t,inverted_value".
void write_transform_csv(std::ostream& out, const LaplaceFn& F, std::span<const double> lambdas);
void write_inverse_csv(std::ostream& out, const LaplaceFn& F, std::span<const double> ts);

}  // namespace wentzell
