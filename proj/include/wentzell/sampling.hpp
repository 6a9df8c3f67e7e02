#pragma once
// Variates for the alpha-stable subordinator H (E e^{-l H_t} = e^{-t l^alpha}),
// its inverse L, and Mittag-Leffler holding times.

#include <span>
#include <vector>

#include "wentzell/rng.hpp"

namespace wentzell {

// Draw of H_t, t >= 0. alpha = 1 or t = 0 returns t and consumes nothing; otherwise two uniforms
// (Kanter's representation, standardized to E e^{-l S} = e^{-l^alpha}).
double sample_stable(double alpha, double t, RngStream& rng);

// Survival E_alpha(-q t^alpha), drawn as chi^{1/alpha} S with chi ~ Exp(q).
double sample_mittag_leffler(double alpha, double q, RngStream& rng);

// Draw of L_t = inf{s : H_s > t} via L_t = t^alpha S^{-alpha}, alpha in (0,1).
double sample_inverse_stable(double alpha, double t, RngStream& rng);

// Cumulative H over a nondecreasing grid g with g[0] = 0: out[0] = 0 and
// out[i] = out[i-1] + H-increment over (g[i-1], g[i]], one stable draw per
// positive increment.
std::vector<double> sample_subordinator_over_increments(double alpha, std::span<const double> grid,
                                                        RngStream& rng);

}  // namespace wentzell
