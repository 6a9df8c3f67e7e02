#include "wentzell/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "wentzell/error.hpp"
#include "wentzell/parallel.hpp"
#include "wentzell/sampling.hpp"
#include "wentzell/simd/kernels.hpp"
#include "wentzell/specfun.hpp"

namespace wentzell {

namespace {

constexpr std::size_t kChunk = 256;  // even, so normals pair up the same way for any chunking
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_start(double x, double dt) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("start must be finite and >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be finite and > 0");
}

// One step of the discrete Skorokhod map. m is the minimum of the driving path
// over the step relative to its start.
struct Skorokhod {
  double drive;
  double reg = 0.0;
  void step(double d, double m) {
    m = std::min(m, std::min(0.0, d));
    const double low = drive + m;
    drive += d;
    if (-low > reg) reg = -low;
  }
  double value() const { return drive + reg; }
};

double clock_scale(const ModelParams& m, ClockMode mode) {
  const double r = m.eta / m.sigma;
  if (mode == ClockMode::classic || m.alpha == 1.0) return r;
  return std::pow(r, 1.0 / m.alpha);
}

bool uses_subordinator(const ModelParams& m, ClockMode mode) {
  return mode == ClockMode::fractional && m.alpha < 1.0;
}

}  // namespace

Path reflect_increments(double x, double dt, std::span<const double> increments,
                        std::span<const double> step_minima) {
  check_start(x, dt);
  if (!step_minima.empty() && step_minima.size() != increments.size())
    throw DomainError("reflect_increments: step_minima must match increments");
  Path p;
  p.start = x;
  p.dt = dt;
  const std::size_t n = increments.size();
  p.values.reserve(n + 1);
  p.regulator.reserve(n + 1);
  p.driving.reserve(n + 1);
  Skorokhod s{x};
  p.values.push_back(x);
  p.regulator.push_back(0.0);
  p.driving.push_back(x);
  for (std::size_t k = 0; k < n; ++k) {
    s.step(increments[k], step_minima.empty() ? 0.0 : step_minima[k]);
    p.values.push_back(s.value());
    p.regulator.push_back(s.reg);
    p.driving.push_back(s.drive);
  }
  return p;
}

ReflectedWalk::ReflectedWalk(double x, double dt, PathRng& rng, bool barriers)
    : dt_(dt), rng_(&rng), barriers_(barriers), value_(x), prev_value_(x), drive_(x) {
  check_start(x, dt);
  idx_ = kChunk;
}

void ReflectedWalk::refill() {
  inc_.resize(kChunk);
  unif_.resize(kChunk);
  minima_.resize(kChunk);
  const double var = 2.0 * dt_;
  rng_->brownian.fill_normal(inc_, std::sqrt(var));
  rng_->bridge.fill_uniform(unif_);
  simd::kernels().bridge_minima(inc_.data(), unif_.data(), kChunk, var, minima_.data());
  if (barriers_) {
    barrier_u_.resize(2 * kChunk);
    rng_->barrier.fill_uniform(barrier_u_);
  }
  idx_ = 0;
}

void ReflectedWalk::step() {
  if (idx_ == kChunk) refill();
  const double d = inc_[idx_];
  const double m = std::min(minima_[idx_], std::min(0.0, d));
  ++idx_;
  prev_value_ = value_;
  prev_reg_ = reg_;
  Skorokhod s{drive_, reg_};
  s.step(d, m);
  drive_ = s.drive;
  reg_ = s.reg;
  step_min_ = m;
  value_ = s.value();
  ++steps_;
}

bool ReflectedWalk::crossed_above(double b) const {
  if (!barriers_) throw DomainError("crossed_above needs a walk built with barriers = true");
  if (steps_ == 0) return value_ >= b;
  if (value_ >= b || prev_value_ >= b) return true;
  const double q = (b - prev_value_) * (b - value_) / dt_;
  if (q > 40.0) return false;
  return barrier_u_[2 * (idx_ - 1)] < std::exp(-q);
}

bool ReflectedWalk::crossed_below(double a) const {
  if (!barriers_) throw DomainError("crossed_below needs a walk built with barriers = true");
  if (steps_ == 0) return value_ <= a;
  if (value_ <= a || prev_value_ <= a) return true;
  const double q = (prev_value_ - a) * (value_ - a) / dt_;
  if (q > 40.0) return false;
  return barrier_u_[2 * (idx_ - 1) + 1] < std::exp(-q);
}

Path simulate_reflected_bm(double x, double horizon, double dt, PathRng& rng) {
  check_start(x, dt);
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be finite and > 0");
  const auto n = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  Path p;
  p.start = x;
  p.dt = dt;
  p.values.reserve(n + 1);
  p.regulator.reserve(n + 1);
  p.driving.reserve(n + 1);
  ReflectedWalk w(x, dt, rng);
  p.values.push_back(x);
  p.regulator.push_back(0.0);
  p.driving.push_back(x);
  for (std::size_t k = 0; k < n; ++k) {
    w.step();
    p.values.push_back(w.value());
    p.regulator.push_back(w.regulator());
    p.driving.push_back(w.driving());
  }
  return p;
}

TimeChange build_time_change(const Path& path, const ModelParams& m, ClockMode mode, RngStream& rng) {
  m.validate_for_paths();
  if (path.size() == 0) throw DomainError("build_time_change: empty path");
  TimeChange tc;
  tc.mode = mode;
  tc.dt = path.dt;
  const std::size_t n = path.size();
  tc.base_grid.resize(n);
  tc.extra.resize(n);
  tc.clock.resize(n);
  const double scale = clock_scale(m, mode);
  std::vector<double> h;
  if (uses_subordinator(m, mode) && scale > 0.0) h = sample_subordinator_over_increments(m.alpha, path.regulator, rng);
  for (std::size_t k = 0; k < n; ++k) {
    tc.base_grid[k] = path.time(k);
    if (scale == 0.0)
      tc.extra[k] = 0.0;
    else
      tc.extra[k] = scale * (h.empty() ? path.regulator[k] : h[k]);
    tc.clock[k] = tc.base_grid[k] + tc.extra[k];
    if (k > 0 && tc.extra[k] > tc.extra[k - 1]) tc.jumps.push_back({tc.base_grid[k], tc.extra[k] - tc.extra[k - 1]});
  }
  return tc;
}

InverseClock invert_time_change(const TimeChange& tc, double out_dt, std::size_t n_out) {
  if (!(out_dt > 0.0)) throw DomainError("invert_time_change: out_dt must be > 0");
  if (tc.clock.empty()) throw DomainError("invert_time_change: empty clock");
  for (std::size_t k = 1; k < tc.clock.size(); ++k)
    if (tc.extra[k] < tc.extra[k - 1]) throw DomainError("invert_time_change: clock is not nondecreasing");
  InverseClock inv;
  for (std::size_t k = 1; k < tc.clock.size(); ++k) {
    const double len = tc.extra[k] - tc.extra[k - 1];
    if (len > 0.0) inv.plateaus.push_back({tc.base_grid[k] + tc.extra[k - 1], len, tc.base_grid[k]});
  }
  std::size_t k = 1;
  for (std::size_t j = 0; j < n_out; ++j) {
    const double t = static_cast<double>(j) * out_dt;
    while (k < tc.clock.size() && tc.clock[k] <= t) ++k;
    if (k >= tc.clock.size()) {
      inv.truncated = true;
      break;
    }
    const double linear_end = tc.base_grid[k] + tc.extra[k - 1];
    inv.grid.push_back(t);
    inv.values.push_back(t < linear_end ? t - tc.extra[k - 1] : tc.base_grid[k]);
  }
  return inv;
}

double boundary_occupation(const InverseClock& inv, double t) {
  double total = 0.0;
  for (const auto& p : inv.plateaus) {
    if (p.start >= t) break;
    total += std::min(p.length, t - p.start);
  }
  return total;
}

double interior_occupation(const InverseClock& inv, double t) { return t - boundary_occupation(inv, t); }

XbarPath::XbarPath(double x, const ModelParams& m, double dt, ClockMode mode, KillMode kill, PathRng& rng,
                   bool barriers)
    : m_(m), mode_(mode), kill_(kill), rng_(&rng), walk_(x, dt, rng, barriers) {
  m.validate_for_paths();
  scale_ = clock_scale(m, mode);
  kill_rate_ = m.c / m.sigma;
  chi_ = kInf;
  if (kill == KillMode::kill && kill_rate_ > 0.0) chi_ = rng.kill.exponential(kill_rate_);
}

double XbarPath::weight_for(double regulator) const {
  if (kill_ == KillMode::kill || kill_rate_ == 0.0) return 1.0;
  return std::exp(-kill_rate_ * regulator);
}

void XbarPath::step() {
  if (dead_) return;
  prev_extra_ = extra_;
  prev_clock_ = clock_;
  walk_.step();
  const double s = walk_.time();
  linear_end_ = s + prev_extra_;
  const double r0 = walk_.previous_regulator();
  const double r1 = walk_.regulator();
  if (r1 > chi_) {
    double j = 0.0;
    const double part = chi_ - r0;
    if (scale_ > 0.0 && part > 0.0)
      j = scale_ * (uses_subordinator(m_, mode_) ? sample_stable(m_.alpha, part, rng_->clock) : part);
    dead_ = true;
    extra_ = prev_extra_ + j;
    death_time_ = linear_end_ + j;
    clock_ = death_time_;
    return;
  }
  if (r1 > r0 && scale_ > 0.0) {
    if (uses_subordinator(m_, mode_)) {
      h_ += sample_stable(m_.alpha, r1 - r0, rng_->clock);
      extra_ = scale_ * h_;
    } else {
      extra_ = scale_ * r1;
    }
  }
  clock_ = s + extra_;
}

WeightedSample XbarPath::at(double t) {
  if (!(t >= last_query_)) throw DomainError("XbarPath::at needs nondecreasing times");
  last_query_ = t;
  while (!dead_ && clock_ <= t) step();
  WeightedSample w;
  w.time = t;
  if (dead_ && t >= death_time_) {
    w.alive = false;
    w.value = 0.0;
    w.weight = 1.0;
    w.boundary = true;
    w.regulator = chi_;
    w.boundary_time = extra_ + (t - death_time_);
    return w;
  }
  if (t < linear_end_) {
    w.value = walk_.previous_value();
    w.regulator = walk_.previous_regulator();
    w.boundary_time = prev_extra_;
  } else {
    w.value = 0.0;
    w.boundary = true;
    w.regulator = std::min(walk_.regulator(), chi_);
    w.boundary_time = prev_extra_ + (t - linear_end_);
  }
  w.weight = weight_for(w.regulator);
  return w;
}

ExitRecord XbarPath::first_exit_above(double b, double max_time) {
  ExitRecord e;
  if (walk_.value() >= b) {
    e.exited = true;
    e.time = clock_;
    e.base_time = walk_.time();
    e.regulator = walk_.regulator();
    e.extra = extra_;
    return e;
  }
  while (clock_ < max_time && !dead_) {
    step();
    if (walk_.crossed_above(b)) {
      e.exited = true;
      e.time = linear_end_;
      e.base_time = walk_.time();
      e.regulator = walk_.regulator();
      e.extra = prev_extra_;
      return e;
    }
  }
  return e;
}

std::optional<double> XbarPath::lifetime(double max_time) {
  if (kill_ != KillMode::kill) throw DomainError("lifetime needs kill mode");
  while (!dead_ && clock_ < max_time) step();
  if (dead_ && death_time_ <= max_time) return death_time_;
  return std::nullopt;
}

XbarTrajectory simulate_xbar(double x, const ModelParams& m, double horizon, double dt, PathRng& rng,
                             KillMode kill, double out_dt, ClockMode mode) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be finite and > 0");
  if (out_dt == 0.0) out_dt = dt;
  if (!(out_dt > 0.0)) throw DomainError("out_dt must be > 0");
  XbarPath xp(x, m, dt, mode, kill, rng);
  XbarTrajectory tr;
  tr.mode = kill;
  const auto n = static_cast<std::size_t>(std::floor(horizon / out_dt + 1e-9));
  tr.samples.reserve(n + 1);
  for (std::size_t j = 0; j <= n; ++j) tr.samples.push_back(xp.at(static_cast<double>(j) * out_dt));
  if (xp.dead() && xp.death_time() <= horizon) tr.death_time = xp.death_time();
  return tr;
}

namespace {

const WeightedSample& sample_at_or_before(const XbarTrajectory& tr, double t) {
  if (tr.samples.empty()) throw DomainError("empty trajectory");
  auto it = std::upper_bound(tr.samples.begin(), tr.samples.end(), t,
                             [](double v, const WeightedSample& s) { return v < s.time; });
  if (it == tr.samples.begin()) throw DomainError("query time before trajectory start");
  return *(it - 1);
}

}  // namespace

double boundary_occupation(const XbarTrajectory& tr, double t) { return sample_at_or_before(tr, t).boundary_time; }

double interior_occupation(const XbarTrajectory& tr, double t) {
  const auto& s = sample_at_or_before(tr, t);
  return s.time - s.boundary_time;
}

std::optional<double> lifetime(const XbarTrajectory& tr) {
  if (tr.mode != KillMode::kill) throw DomainError("lifetime query needs a kill-mode trajectory");
  return tr.death_time;
}

std::optional<double> first_exit(const XbarTrajectory& tr, double a, double b) {
  for (const auto& s : tr.samples)
    if (s.alive && (s.value < a || s.value >= b)) return s.time;
  return std::nullopt;
}

std::optional<double> first_exit(const Path& p, double a, double b) {
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p.values[k] < a || p.values[k] >= b) return p.time(k);
  return std::nullopt;
}

void write_path_csv(std::ostream& out, const XbarTrajectory& tr) {
  const auto old = out.precision(17);
  out << "t,xbar,weight,boundary_flag\n";
  for (const auto& s : tr.samples) {
    if (!s.alive) break;
    out << s.time << ',' << s.value << ',' << s.weight << ',' << (s.boundary ? 1 : 0) << '\n';
  }
  out.precision(old);
}

double sample_lifetime_direct(double x, const ModelParams& m, PathRng& rng) {
  m.validate_for_paths();
  if (!(m.c > 0.0)) throw DomainError("sample_lifetime_direct needs c > 0");
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("start must be finite and >= 0");
  const double chi = rng.aux.exponential(m.c / m.sigma);
  double life = 0.0;
  if (x > 0.0) life += sample_stable(0.5, x, rng.aux);
  life += sample_stable(0.5, chi, rng.aux);
  if (m.eta > 0.0) life += clock_scale(m, ClockMode::fractional) * sample_stable(m.alpha, chi, rng.aux);
  return life;
}

FivpValue fivp_evaluate(double x, const ModelParams& m, const InitialDatum& f, double t, FivpMethod method,
                        const MonteCarloSetup& mc) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("fivp_evaluate: t must be finite and > 0");
  ModelParams classic = m;
  classic.alpha = 1.0;
  if (method == FivpMethod::quadrature) {
    classic.validate_for_transforms();
    const LaplaceFn F = fbvp_laplace(classic, f, x);
    auto inner = [&](double s) { return invert_talbot(F, std::max(s, 1e-10)); };
    if (m.alpha == 1.0) return {inner(t), 0.0};
    boost::math::quadrature::exp_sinh<double> integrator;
    auto integrand = [&](double s) {
      const double l = inverse_stable_density_l(m.alpha, t, s);
      return l == 0.0 ? 0.0 : inner(s) * l;
    };
    const double v = integrator.integrate(integrand, 0.0, kInf);
    if (!std::isfinite(v)) throw NumericError("fivp_evaluate: quadrature failed");
    return {v, 0.0};
  }
  classic.validate_for_paths();
  if (mc.n < 2) throw DomainError("fivp_evaluate: need n >= 2 paths");
  std::vector<double> out(mc.n);
  parallel_for(mc.n, mc.threads, [&](std::size_t i) {
    PathRng rng(mc.seed, i);
    const double time = m.alpha == 1.0 ? t : sample_inverse_stable(m.alpha, t, rng.aux);
    XbarPath xp(x, classic, mc.dt, ClockMode::classic, KillMode::weight, rng);
    const WeightedSample w = xp.at(time);
    out[i] = f(w.value) * w.weight;
  });
  const McEstimate e = mc_estimate(out, mc.seed);
  return {e.mean, e.std_error};
}

namespace {

DualitySide compare_sides(std::span<const double> lhs, std::span<const double> rhs, std::uint64_t seed, double k) {
  DualitySide d;
  d.lhs = mc_estimate(lhs, seed);
  d.rhs = mc_estimate(rhs, seed);
  d.difference = d.lhs.mean - d.rhs.mean;
  d.combined_stderr = std::hypot(d.lhs.std_error, d.rhs.std_error);
  d.agree = std::fabs(d.difference) <= k * d.combined_stderr;
  return d;
}

double regulator_after(double base_time, double dt, PathRng& rng) {
  const auto n = static_cast<std::uint64_t>(std::llround(base_time / dt));
  ReflectedWalk w(0.0, dt, rng);
  for (std::uint64_t i = 0; i < n; ++i) w.step();
  return w.regulator();
}

}  // namespace

DualityReport check_clock_duality(const ModelParams& m, double t, double s, const MonteCarloSetup& mc, double k) {
  m.validate_for_paths();
  if (!(m.eta > 0.0)) throw DomainError("check_clock_duality needs eta > 0");
  if (!(t >= 0.0 && s >= t) || !std::isfinite(s)) throw DomainError("check_clock_duality needs 0 <= t <= s");
  if (mc.n < 2) throw DomainError("check_clock_duality: need n >= 2");
  const double a = m.alpha;
  const double scale = clock_scale(m, ClockMode::fractional);
  const double ratio = m.eta / m.sigma;
  auto inverse_stable = [&](double time, RngStream& r) {
    if (time <= 0.0) return 0.0;
    return a == 1.0 ? time : sample_inverse_stable(a, time, r);
  };
  const std::uint64_t seed_ii = derive_seed(mc.seed, "duality-ii");
  const std::uint64_t seed_iii = derive_seed(mc.seed, "duality-iii");
  std::vector<double> l2(mc.n), r2(mc.n), l3(mc.n), r3(mc.n);
  parallel_for(mc.n, mc.threads, [&](std::size_t i) {
    {
      PathRng rng(seed_ii, i);
      // Vbar_t = t + (eta/sigma)^{1/alpha} H(g_t), g_t from the simulated path.
      const double g = regulator_after(t, mc.dt, rng);
      const double vbar = t + (g > 0.0 ? scale * sample_stable(a, g, rng.clock) : 0.0);
      l2[i] = vbar >= s ? 1.0 : 0.0;
      // T^L_{s-t} = g^{-1}((sigma/eta) L_{s-t}) from the exact laws.
      const double level = inverse_stable(s - t, rng.aux) / ratio;
      const double tl = level > 0.0 ? sample_stable(0.5, level, rng.aux) : 0.0;
      r2[i] = t >= tl ? 1.0 : 0.0;
    }
    {
      PathRng rng(seed_iii, i);
      // Vcal_t >= s  iff  g^{-1}((sigma/eta) L_t) >= s - t  iff  g_{s-t} <= (sigma/eta) L_t.
      const double level = inverse_stable(t, rng.aux) / ratio;
      const double g = regulator_after(s - t, mc.dt, rng);
      l3[i] = g <= level ? 1.0 : 0.0;
      // T^H_{s-t} = H((eta/sigma) g_{s-t}) with g_{s-t} ~ L^{1/2}_{s-t}.
      const double gs = s > t ? sample_inverse_stable(0.5, s - t, rng.clock) : 0.0;
      const double th = gs > 0.0 ? sample_stable(a, ratio * gs, rng.clock) : 0.0;
      r3[i] = t >= th ? 1.0 : 0.0;
    }
  });
  DualityReport rep;
  rep.t = t;
  rep.s = s;
  rep.item_ii = compare_sides(l2, r2, mc.seed, k);
  rep.item_iii = compare_sides(l3, r3, mc.seed, k);
  rep.agree = rep.item_ii.agree && rep.item_iii.agree;
  return rep;
}

std::vector<double> sample_inverse_regulator(double level, double horizon, const MonteCarloSetup& mc) {
  if (!(level >= 0.0) || !(horizon > 0.0)) throw DomainError("sample_inverse_regulator: need level >= 0, horizon > 0");
  std::vector<double> out(mc.n);
  parallel_for(mc.n, mc.threads, [&](std::size_t i) {
    PathRng rng(mc.seed, i);
    ReflectedWalk w(0.0, mc.dt, rng);
    while (w.regulator() <= level && w.time() < horizon) w.step();
    out[i] = std::min(w.time(), horizon);
  });
  return out;
}

}  // namespace wentzell
