#include "wentzell/sampling.hpp"

#include <cmath>
#include <numbers>

#include "wentzell/error.hpp"
#include "wentzell/simd/kernels.hpp"

namespace wentzell {

namespace {

void check_alpha(double alpha, bool allow_one) {
  if (!(alpha > 0.0 && (allow_one ? alpha <= 1.0 : alpha < 1.0)))
    throw DomainError(allow_one ? "alpha must lie in (0,1]" : "alpha must lie in (0,1)");
}

// Standard one-sided stable S with E e^{-l S} = e^{-l^alpha}, alpha in (0,1).
double standard_stable(double alpha, RngStream& rng) {
  const double u = std::numbers::pi * rng.uniform();
  const double e = -simd::ref_log(rng.uniform());
  const double a = std::sin(alpha * u) / std::pow(std::sin(u), 1.0 / alpha);
  const double b = std::pow(std::sin((1.0 - alpha) * u) / e, (1.0 - alpha) / alpha);
  return a * b;
}

}  // namespace

double sample_stable(double alpha, double t, RngStream& rng) {
  check_alpha(alpha, true);
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("sample_stable: t must be finite and >= 0");
  if (alpha == 1.0 || t == 0.0) return t;
  return std::pow(t, 1.0 / alpha) * standard_stable(alpha, rng);
}

double sample_mittag_leffler(double alpha, double q, RngStream& rng) {
  check_alpha(alpha, true);
  if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("sample_mittag_leffler: q must be finite and > 0");
  const double chi = rng.exponential(q);
  return sample_stable(alpha, chi, rng);
}

double sample_inverse_stable(double alpha, double t, RngStream& rng) {
  check_alpha(alpha, false);
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("sample_inverse_stable: t must be finite and > 0");
  return std::pow(t / standard_stable(alpha, rng), alpha);
}

std::vector<double> sample_subordinator_over_increments(double alpha, std::span<const double> grid,
                                                        RngStream& rng) {
  check_alpha(alpha, true);
  std::vector<double> out(grid.size(), 0.0);
  if (grid.empty()) return out;
  if (grid[0] != 0.0) throw DomainError("subordinator grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double d = grid[i] - grid[i - 1];
    if (!(d >= 0.0)) throw DomainError("subordinator grid must be nondecreasing");
    out[i] = out[i - 1] + (d > 0.0 ? sample_stable(alpha, d, rng) : 0.0);
  }
  return out;
}

}  // namespace wentzell
