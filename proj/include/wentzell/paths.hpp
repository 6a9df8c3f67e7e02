#pragma once
// Reflected Brownian motion with its Skorokhod regulator, the clocks
// V_t = t + (eta/sigma) g_t and Vbar_t = t + (eta/sigma)^{1/alpha} H(g_t)
// (g = regulator), their right-continuous inverses, and the time-changed
// processes X = X+ o V^{-1} and Xbar = X+ o Vbar^{-1}.
//
// The driving Brownian motion has variance 2t (generator d^2/dx^2). Within each
// step the exact Brownian-bridge minimum is sampled, so the regulator is exact
// in law at grid times.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "wentzell/datum.hpp"
#include "wentzell/estimators.hpp"
#include "wentzell/rng.hpp"
#include "wentzell/transforms.hpp"

namespace wentzell {

struct Path {
  double start = 0.0;
  double dt = 0.0;
  std::vector<double> values;     // X+ >= 0
  std::vector<double> regulator;  // nondecreasing
  std::vector<double> driving;    // start + W, before reflection

  std::size_t size() const { return values.size(); }
  double time(std::size_t k) const { return static_cast<double>(k) * dt; }
};

// Skorokhod map of a discrete driving path. step_minima[k] is the minimum of the
// driving path over step k relative to its value at the start of the step
// (<= min(0, increment)); when empty only grid values enter the running minimum.
Path reflect_increments(double x, double dt, std::span<const double> increments,
                        std::span<const double> step_minima = {});

// Streaming reflected Brownian motion. Random numbers are drawn in chunks from
// the brownian, bridge and (optionally) barrier streams of a PathRng.
class ReflectedWalk {
 public:
  ReflectedWalk(double x, double dt, PathRng& rng, bool barriers = false);

  void step();

  std::uint64_t steps() const { return steps_; }
  double time() const { return static_cast<double>(steps_) * dt_; }
  double dt() const { return dt_; }
  double value() const { return value_; }
  double previous_value() const { return prev_value_; }
  double regulator() const { return reg_; }
  double previous_regulator() const { return prev_reg_; }
  double driving() const { return drive_; }
  // Minimum of the driving path over the last step, relative to its start.
  double step_minimum() const { return step_min_; }

  // Whether the path reached level b during the last step: either the end point
  // is at or above b, or the Brownian bridge between the end points crossed it.
  // Requires barriers = true.
  bool crossed_above(double b) const;
  bool crossed_below(double a) const;

 private:
  void refill();

  double dt_;
  PathRng* rng_;
  bool barriers_;
  std::uint64_t steps_ = 0;
  double value_, prev_value_;
  double reg_ = 0.0, prev_reg_ = 0.0;
  double drive_;
  double step_min_ = 0.0;
  std::size_t idx_ = 0;
  std::vector<double> inc_, unif_, minima_, barrier_u_;
};

// Path on the grid k dt, k = 0..ceil(horizon/dt).
Path simulate_reflected_bm(double x, double horizon, double dt, PathRng& rng);

enum class ClockMode { classic, fractional };
enum class KillMode { weight, kill };

struct Jump {
  double base_time;  // grid time at which the jump is recorded
  double size;
};

struct TimeChange {
  ClockMode mode = ClockMode::classic;
  double dt = 0.0;
  std::vector<double> base_grid;
  std::vector<double> extra;  // clock - base time: (eta/sigma) g or (eta/sigma)^{1/alpha} H(g)
  std::vector<double> clock;  // base_grid + extra
  std::vector<Jump> jumps;    // positive jumps only
};

// Fractional mode with alpha = 1 coincides with classic mode.
TimeChange build_time_change(const Path& path, const ModelParams& m, ClockMode mode, RngStream& rng);

struct Plateau {
  double start;   // clock time where the inverse becomes flat
  double length;  // jump size
  double level;   // value of the inverse on [start, start + length)
};

struct InverseClock {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<Plateau> plateaus;
  // Output grid reached past the last clock value; values stop there.
  bool truncated = false;
};

// Inverse inf{s : clock(s) > t} on t_j = j * out_dt, j = 0..n_out-1. Between grid
// points the clock is s + extra_{k-1} on [s_{k-1}, s_k), then jumps at s_k.
InverseClock invert_time_change(const TimeChange& tc, double out_dt, std::size_t n_out);

// Total plateau length inside [0, t]: the boundary occupation time.
double boundary_occupation(const InverseClock& inv, double t);
double interior_occupation(const InverseClock& inv, double t);

struct WeightedSample {
  double time = 0.0;
  double value = 0.0;
  double weight = 1.0;  // exp(-(c/sigma) g o Vbar^{-1}) in weight mode, 1 in kill mode
  bool alive = true;
  bool boundary = false;        // on a plateau of the inverse clock
  double boundary_time = 0.0;   // time spent at 0 up to `time`
  double regulator = 0.0;       // g o Vbar^{-1}
};

struct ExitRecord {
  bool exited = false;
  double time = 0.0;       // clock time
  double base_time = 0.0;  // time of the reflected path
  double regulator = 0.0;
  double extra = 0.0;      // time added by the clock, i.e. time held at 0
};

// Time-changed process built step by step from a ReflectedWalk. Step k covers
// the clock interval [C_{k-1}, C_k): a linear part of length dt showing X+ at
// the start of the step, then a plateau at 0 of length J_k. In kill mode an
// exponential threshold chi (rate c/sigma, kill stream) ends the path when the
// regulator passes it; the death time falls inside that step's plateau.
class XbarPath {
 public:
  XbarPath(double x, const ModelParams& m, double dt, ClockMode mode, KillMode kill, PathRng& rng,
           bool barriers = false);

  void step();
  // State at clock time t; successive calls need nondecreasing t.
  WeightedSample at(double t);
  // First clock time at which X reaches level b (from below); gives up at max_time.
  ExitRecord first_exit_above(double b, double max_time);
  // Death time in kill mode, or nullopt if alive at max_time.
  std::optional<double> lifetime(double max_time);

  const ReflectedWalk& walk() const { return walk_; }
  double clock() const { return clock_; }
  double extra() const { return extra_; }
  double linear_end() const { return linear_end_; }
  bool dead() const { return dead_; }
  double death_time() const { return death_time_; }
  double threshold() const { return chi_; }

 private:
  double weight_for(double regulator) const;

  ModelParams m_;
  ClockMode mode_;
  KillMode kill_;
  PathRng* rng_;
  ReflectedWalk walk_;
  double scale_;  // eta/sigma or (eta/sigma)^{1/alpha}
  double kill_rate_;
  double chi_;
  double h_ = 0.0;  // H at the current regulator value
  double extra_ = 0.0, prev_extra_ = 0.0;
  double last_query_ = 0.0;
  double clock_ = 0.0, prev_clock_ = 0.0, linear_end_ = 0.0;
  bool dead_ = false;
  double death_time_ = 0.0;
};

struct XbarTrajectory {
  KillMode mode = KillMode::weight;
  std::vector<WeightedSample> samples;
  std::optional<double> death_time;
};

// Samples on t_j = j * out_dt up to the horizon (out_dt = 0 uses dt).
XbarTrajectory simulate_xbar(double x, const ModelParams& m, double horizon, double dt, PathRng& rng,
                             KillMode kill = KillMode::weight, double out_dt = 0.0,
                             ClockMode mode = ClockMode::fractional);

// Queries on a stored trajectory. lifetime() throws DomainError unless the
// trajectory was simulated in kill mode; nullopt means alive at the horizon.
double boundary_occupation(const XbarTrajectory& tr, double t);
double interior_occupation(const XbarTrajectory& tr, double t);
std::optional<double> lifetime(const XbarTrajectory& tr);
// First grid time with value outside [a, b); nullopt if none.
std::optional<double> first_exit(const XbarTrajectory& tr, double a, double b);
std::optional<double> first_exit(const Path& p, double a, double b);

// "t,xbar,weight,boundary_flag"
void write_path_csv(std::ostream& out, const XbarTrajectory& tr);

// H^{1/2}_x + H^{1/2}_chi + (eta/sigma)^{1/alpha} H^alpha_chi with chi ~ Exp(c/sigma).
// Draws use the aux stream. Throws DomainError for c = 0.
double sample_lifetime_direct(double x, const ModelParams& m, PathRng& rng);

struct MonteCarloSetup {
  std::size_t n = 10000;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

enum class FivpMethod { monte_carlo, quadrature };

struct FivpValue {
  double value;
  double std_error;  // 0 for quadrature
};

// v(t,x) = E_x f(X o L_t) with X the sticky elastic process (classic clock).
// monte_carlo: one L_t draw per path, X simulated to that time (weight mode).
// quadrature:  int_0^inf E_x f(X_s) l(t,s) ds with the inner expectation from
//              Talbot inversion of the sticky resolvent.
FivpValue fivp_evaluate(double x, const ModelParams& m, const InitialDatum& f, double t, FivpMethod method,
                        const MonteCarloSetup& mc = {});

struct DualitySide {
  McEstimate lhs;
  McEstimate rhs;
  double difference;
  double combined_stderr;
  bool agree;
};

struct DualityReport {
  double t, s;
  DualitySide item_ii;   // P(Vbar_t >= s)  vs P(t >= T^L_{s-t})
  DualitySide item_iii;  // P(Vcal_t >= s)  vs P(t >= T^H_{s-t})
  bool agree;
};

// Left sides use simulated regulators (grid step mc.dt); right sides use the
// exact laws g_t ~ L^{1/2}_t and g^{-1}_l ~ H^{1/2}_l. Agreement is within k
// combined standard errors.
DualityReport check_clock_duality(const ModelParams& m, double t, double s, const MonteCarloSetup& mc,
                                  double k = 3.0);

// Samples of the inverse regulator g^{-1}_level from simulated paths, censored
// at horizon (censored samples equal horizon).
std::vector<double> sample_inverse_regulator(double level, double horizon, const MonteCarloSetup& mc);

}  // namespace wentzell
