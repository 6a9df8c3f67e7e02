#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "wentzell/error.hpp"
#include "wentzell/estimators.hpp"
#include "wentzell/inversion.hpp"
#include "wentzell/parallel.hpp"
#include "wentzell/paths.hpp"

using namespace wentzell;

TEST_CASE("Skorokhod map of a fixed path") {
  const std::vector<double> inc = {-2.0, 1.0, -3.0};
  const auto p = reflect_increments(1.0, 1.0, inc);
  CHECK(p.values == std::vector<double>{1, 0, 1, 0});
  CHECK(p.regulator == std::vector<double>{0, 1, 1, 3});
  CHECK(p.driving == std::vector<double>{1, -1, 0, -3});
  // an excursion below 0 inside a step counts even if the end point is positive
  const std::vector<double> up = {0.5}, dip = {-1.0};
  const auto q = reflect_increments(0.2, 1.0, up, dip);
  CHECK(q.regulator[1] == doctest::Approx(0.8));
  CHECK(q.values[1] == doctest::Approx(1.5));
  CHECK_THROWS_AS(reflect_increments(-0.1, 1.0, inc), DomainError);
  CHECK_THROWS_AS(reflect_increments(0.0, 1.0, inc, up), DomainError);
}

TEST_CASE("reflected walk invariants") {
  PathRng rng(11, 0);
  ReflectedWalk w(0.3, 1e-3, rng);
  for (int k = 0; k < 20000; ++k) {
    const double reg0 = w.regulator();
    const double drive0 = w.driving();
    w.step();
    REQUIRE(w.value() >= 0.0);
    REQUIRE(w.value() == w.driving() + w.regulator());
    REQUIRE(w.regulator() >= reg0);
    REQUIRE(w.step_minimum() <= std::min(0.0, w.driving() - drive0));
    // the regulator only moves when the path touches 0 inside the step
    if (drive0 + w.step_minimum() + reg0 > 0.0) REQUIRE(w.regulator() == reg0);
  }
  CHECK(w.steps() == 20000);
  CHECK(w.time() == doctest::Approx(20.0));
  CHECK_THROWS_AS(w.crossed_above(1.0), DomainError);
}

TEST_CASE("regulator from 0 has the law of |W_t|") {
  // the bridge minimum makes this exact at any step size
  std::vector<double> r(20000);
  parallel_for(r.size(), 0, [&](std::size_t i) {
    PathRng rng(12, i);
    ReflectedWalk w(0.0, 0.05, rng);
    for (int k = 0; k < 20; ++k) w.step();
    r[i] = w.regulator();
  });
  const auto ks = ks_one_sample(r, [](double x) { return x <= 0 ? 0.0 : std::erf(x / 2.0); });
  CHECK(ks.p_value > 0.001);
}

TEST_CASE("simulated path has the right grid") {
  PathRng rng(13, 0);
  const auto p = simulate_reflected_bm(0.5, 1.0, 0.1, rng);
  CHECK(p.size() == 11);
  CHECK(p.time(10) == doctest::Approx(1.0));
  CHECK(p.values[0] == 0.5);
}

TEST_CASE("time change and its inverse on a fixed regulator") {
  Path p;
  p.start = 0.0;
  p.dt = 1.0;
  p.values = {0, 0, 0, 0};
  p.regulator = {0, 0, 1, 1};
  p.driving = {0, 0, -1, -1};
  RngStream rng(1, 1);
  const ModelParams m{2.0, 1.0, 0.0, 1.0};
  const auto tc = build_time_change(p, m, ClockMode::classic, rng);
  CHECK(tc.extra == std::vector<double>{0, 0, 2, 2});
  CHECK(tc.clock == std::vector<double>{0, 1, 4, 5});
  REQUIRE(tc.jumps.size() == 1);
  CHECK(tc.jumps[0].base_time == 2.0);
  CHECK(tc.jumps[0].size == 2.0);

  const auto inv = invert_time_change(tc, 0.5, 11);
  CHECK(inv.truncated);
  CHECK(inv.grid.size() == 10);
  CHECK(inv.values == std::vector<double>{0, 0.5, 1, 1.5, 2, 2, 2, 2, 2, 2.5});
  REQUIRE(inv.plateaus.size() == 1);
  CHECK(inv.plateaus[0].start == 2.0);
  CHECK(inv.plateaus[0].length == 2.0);
  CHECK(boundary_occupation(inv, 3.0) == 1.0);
  CHECK(boundary_occupation(inv, 5.0) == 2.0);
  CHECK(interior_occupation(inv, 5.0) == 3.0);

  RngStream r2(1, 1);
  const auto frac = build_time_change(p, m, ClockMode::fractional, r2);
  CHECK(frac.clock == tc.clock);
  CHECK(r2.position() == 0);
}

TEST_CASE("fractional clock with alpha = 1 is the classic clock") {
  const ModelParams m{0.7, 1.0, 0.4, 1.0};
  PathRng a(21, 3), b(21, 3);
  XbarPath pa(0.2, m, 1e-3, ClockMode::fractional, KillMode::weight, a);
  XbarPath pb(0.2, m, 1e-3, ClockMode::classic, KillMode::weight, b);
  for (double t = 0.0; t < 3.0; t += 0.013) {
    const auto sa = pa.at(t), sb = pb.at(t);
    REQUIRE(sa.value == sb.value);
    REQUIRE(sa.weight == sb.weight);
    REQUIRE(sa.boundary_time == sb.boundary_time);
  }
}

TEST_CASE("no stickiness means no time at the boundary") {
  const ModelParams m{0.0, 1.0, 0.0, 0.5};
  PathRng a(22, 0), b(22, 0);
  XbarPath xp(0.0, m, 1e-3, ClockMode::fractional, KillMode::weight, a);
  ReflectedWalk w(0.0, 1e-3, b);
  for (int k = 1; k <= 1000; ++k) {
    w.step();
    const auto s = xp.at(k * 1e-3);
    REQUIRE(s.boundary_time == 0.0);
    REQUIRE(s.value == w.value());
  }
}

TEST_CASE("Xbar samples") {
  const ModelParams m{1.0, 1.0, 0.0, 0.5};
  PathRng rng(23, 0);
  XbarPath xp(0.0, m, 1e-3, ClockMode::fractional, KillMode::weight, rng);
  double prev_b = 0.0;
  for (double t = 0.0; t <= 2.0; t += 0.01) {
    const auto s = xp.at(t);
    REQUIRE(s.weight == 1.0);
    REQUIRE(s.value >= 0.0);
    REQUIRE(s.boundary_time >= prev_b);
    REQUIRE(s.boundary_time <= t + 1e-12);
    if (s.boundary) REQUIRE(s.value == 0.0);
    prev_b = s.boundary_time;
  }
  CHECK_THROWS_AS(xp.at(1.0), DomainError);
  CHECK_THROWS_AS(xp.lifetime(10.0), DomainError);
}

TEST_CASE("kill mode ends the path") {
  const ModelParams m{1.0, 1.0, 1.0, 0.5};
  PathRng rng(24, 0);
  XbarPath xp(0.0, m, 1e-3, ClockMode::fractional, KillMode::kill, rng);
  const auto life = xp.lifetime(1e4);
  REQUIRE(life.has_value());
  CHECK(*life > 0.0);
  CHECK(xp.at(*life + 1.0).alive == false);
  PathRng r2(24, 0);
  CHECK_THROWS_AS(sample_lifetime_direct(0.5, ModelParams{1.0, 1.0, 0.0, 0.5}, r2), DomainError);
  CHECK(sample_lifetime_direct(0.5, m, r2) > 0.0);
}

TEST_CASE("stored trajectories") {
  const ModelParams m{1.0, 1.0, 0.5, 0.5};
  PathRng rng(25, 0);
  const auto tr = simulate_xbar(0.1, m, 2.0, 1e-3, rng, KillMode::weight, 0.01);
  CHECK(tr.samples.size() == 201);
  for (double t : {0.5, 1.0, 2.0})
    CHECK(boundary_occupation(tr, t) + interior_occupation(tr, t) == doctest::Approx(t));
  CHECK_THROWS_AS(lifetime(tr), DomainError);
  std::ostringstream csv;
  write_path_csv(csv, tr);
  CHECK(csv.str().rfind("t,xbar,weight,boundary_flag\n", 0) == 0);
  const auto e = first_exit(tr, 0.0, 1e9);
  CHECK_FALSE(e.has_value());
}

TEST_CASE("same seed, same path") {
  const ModelParams m{0.5, 1.0, 0.2, 0.4};
  PathRng a(26, 7), b(26, 7);
  const auto ta = simulate_xbar(0.3, m, 1.0, 1e-3, a, KillMode::kill);
  const auto tb = simulate_xbar(0.3, m, 1.0, 1e-3, b, KillMode::kill);
  REQUIRE(ta.samples.size() == tb.samples.size());
  for (std::size_t i = 0; i < ta.samples.size(); ++i) REQUIRE(ta.samples[i].value == tb.samples[i].value);
}

TEST_CASE("subordinated solution by quadrature matches transform inversion") {
  const ModelParams m{0.5, 1.0, 0.5, 0.5};
  const auto f = InitialDatum::exponential(1.0);
  for (double x : {0.0, 0.5}) {
    const auto q = fivp_evaluate(x, m, f, 1.0, FivpMethod::quadrature);
    CHECK(q.value == doctest::Approx(invert_talbot(fivp_laplace(m, f, x), 1.0)).epsilon(1e-6));
  }
}

TEST_CASE("duality needs a sticky boundary") {
  MonteCarloSetup mc{100, 0.01, 1, 1};
  CHECK_THROWS_AS(check_clock_duality(ModelParams{0.0, 1.0, 0.0, 0.5}, 1.0, 2.0, mc), DomainError);
}

TEST_CASE("parallel_for covers every index and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(1000, 4, [](std::size_t i) { if (i == 777) throw NumericError("x"); }), NumericError);
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
}
