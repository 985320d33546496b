#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <utility>

#include "qwblow/approx_solution.hpp"
#include "qwblow/checks.hpp"
#include "qwblow/errors.hpp"
#include "qwblow/wave_solver.hpp"

using namespace qwblow;

namespace {

constexpr double kUnitAmplitude = 0.934423452596914;  // reference bump rescaled to tau0 = 1

RunConfig run_config_for(InitialData data) {
  RunConfig cfg;
  cfg.data = std::move(data);
  return cfg;
}

double max_abs_U(const WaveState& s) {
  double m = 0.0;
  for (double v : s.U) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("initial sampling") {
  const auto s = init_state(reference_data(), 0.25, 0.2, 10.0);
  // node 2 sits at r = 0.5
  CHECK(s.r(2) == doctest::Approx(0.5));
  CHECK(s.at(2) == doctest::Approx(0.0395508).epsilon(1e-6));
  CHECK(s.at(2) == doctest::Approx(0.25 * 0.5 * std::pow(0.75, 4)).epsilon(1e-14));
  for (std::size_t i = 5; i < s.end(); ++i) CHECK(s.at(static_cast<std::ptrdiff_t>(i)) == 0.0);
  CHECK(s.at(-1) == -s.at(0));
  CHECK_THROWS_AS(init_state(reference_data(), 0.25, 0.01, 1.2), InputError);
  CHECK_THROWS_AS(init_state(reference_data(), 0.0, 0.01, 10.0), InputError);
  CHECK_THROWS_AS(init_state(reference_data(), 0.25, 0.0, 10.0), InputError);
}

TEST_CASE("zero amplitude stays zero") {
  auto s = init_state(reference_data(0.0), 0.2, 0.01, 20.0);
  for (int k = 0; k < 200; ++k) {
    const auto d = step(s);
    CHECK(d.max_abs_w1 == 0.0);
  }
  CHECK(max_abs_U(s) == 0.0);
  const auto f = riemann_quantities(s);
  for (double v : f.w1) CHECK(v == 0.0);
  for (double v : f.w2) CHECK(v == 0.0);
  auto cfg = run_config_for(reference_data(0.0));
  cfg.epsilon = 0.2;
  cfg.dr = 0.01;
  cfg.t_max = 5.0;
  cfg.rho0 = -0.3;
  const auto run = run_to_blowup(cfg);
  CHECK(run.report.cause == Termination::horizon);
  CHECK_FALSE(run.report.T_star.has_value());
  CHECK(run.monitors.A == 0.0);
  CHECK(run.monitors.B == 0.0);
  CHECK(run.monitors.C == 0.0);
  CHECK(run.monitors.D == 0.0);
}

TEST_CASE("plus characteristic through M is the light ray at zero amplitude") {
  auto cfg = run_config_for(reference_data(0.0));
  cfg.epsilon = 0.2;
  cfg.dr = 0.01;
  cfg.t_max = 8.0;
  cfg.extra_paths = {{1.0, 1}};
  cfg.path_stride = 1;
  const auto run = run_to_blowup(cfg);
  REQUIRE(run.paths.size() == 1);
  const auto& path = run.paths[0].samples();
  REQUIRE(path.size() > 100);
  for (const auto& p : path) CHECK(std::abs(p.f.r - (p.t + 1.0)) < 1e-12);
}

TEST_CASE("frozen coefficients converge at second order") {
  const auto c = linear_convergence(reference_data());
  CHECK(c.order >= 1.9);
  CHECK(c.err[0] > c.err[1]);
}

TEST_CASE("initial Riemann fields match the data") {
  const double eps = 1e-6;
  const double dr = 1e-3;
  StepOptions opts;
  opts.fixed_dt = 0.1 * dr;
  auto s = init_state(reference_data(), eps, dr, 10.0, opts);
  step(s, opts);
  const auto f = riemann_quantities(s);
  const auto& u0 = reference_data().u0;
  double worst = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < f.r.size(); ++k) {
    const double r = f.r[k];
    if (r > 0.95) break;
    const auto j = u0.jet(r);
    const double expect = -eps * (2.0 * j.d1 + r * j.d2);  // -(r u0)''
    worst = std::max(worst, std::abs(f.w1[k] - expect));
    scale = std::max(scale, std::abs(expect));
  }
  CHECK(worst < 1e-2 * scale);
}

TEST_CASE("linear outgoing waves carry everything in w1") {
  StepOptions opts;
  opts.frozen_coefficients = true;
  auto s = init_state(reference_data(), 1.0, 5e-3, 30.0, opts);
  StepDiagnostics d;
  while (s.t < 10.0) d = step(s, opts);
  CHECK(d.max_abs_w2 < 1e-2 * d.max_abs_w1);
}

TEST_CASE("finite propagation speed") {
  StepOptions opts;
  auto s = init_state(reference_data(kUnitAmplitude), 0.2, 5e-3, 20.0, opts);
  double cmax = 1.0;
  while (s.t < 4.0) {
    const auto d = step(s, opts);
    cmax = std::max(cmax, std::sqrt(d.max_c2));
    // exact zeros past the stencil cone, round-off level past the physical one
    const double cone = s.t * cmax + 1.0 + 2.0 * s.dr;
    const double stencil = s.t * cmax / opts.cfl + 1.0 + 2.0 * s.dr;
    const double scale = max_abs_U(s);
    for (std::size_t i = s.offset; i < s.end(); ++i) {
      const double u = std::abs(s.at(static_cast<std::ptrdiff_t>(i)));
      if (s.r(i) > stencil) CHECK(u == 0.0);
      if (s.r(i) > cone) CHECK(u < 1e-10 * scale);
    }
  }
}

TEST_CASE("trailing window agrees with the full domain near the cone") {
  StepOptions full, win;
  full.fixed_dt = win.fixed_dt = 2.5e-3;
  win.window_behind = 4.0;
  const InitialData d = reference_data(kUnitAmplitude);
  auto a = init_state(d, 1.0 / 6.0, 5e-3, 20.0, full);
  auto b = init_state(d, 1.0 / 6.0, 5e-3, 20.0, win);
  for (int k = 0; k < 4800; ++k) {
    step(a, full);
    step(b, win);
  }
  REQUIRE(a.t == b.t);
  CHECK(b.lo > 0);
  double diff = 0.0;
  for (std::size_t i = b.lo; i < b.end(); ++i) {
    if (a.r(i) < a.t - 3.0) continue;
    const auto k = static_cast<std::ptrdiff_t>(i);
    diff = std::max(diff, std::abs(a.at(k) - b.at(k)));
  }
  CHECK(diff < 1e-10 * max_abs_U(a));
}

TEST_CASE("hyperbolicity loss ends the run") {
  auto cfg = run_config_for(reference_data(kUnitAmplitude));
  cfg.epsilon = 1.0 / 3.0;
  cfg.dr = 2e-3;
  cfg.t_max = 50.0;
  const auto run = run_to_blowup(cfg);
  CHECK(run.report.cause == Termination::hyperbolicity_loss);
  CHECK(run.rows.back().min_c2 <= 0.25);
}

TEST_CASE("budget cap and horizon validation") {
  auto cfg = run_config_for(reference_data(kUnitAmplitude));
  cfg.epsilon = 0.1;
  cfg.dr = 5e-3;
  cfg.t_max = 100.0;
  cfg.max_node_steps = 1e5;
  const auto run = run_to_blowup(cfg);
  CHECK(run.report.cause == Termination::budget);
  CHECK(run.report.node_steps >= 1e5);
  cfg.R_max = 50.0;
  CHECK_THROWS_AS(run_to_blowup(cfg), InputError);
  cfg.R_max = 0.0;
  cfg.thresholds = {200.0, 50.0};
  CHECK_THROWS_AS(run_to_blowup(cfg), InputError);
}

TEST_CASE("predicted cost bounds the actual cost") {
  auto cfg = run_config_for(reference_data(kUnitAmplitude));
  cfg.epsilon = 0.2;
  cfg.dr = 4e-3;
  cfg.t_max = 20.0;
  cfg.step.window_behind = 3.0;
  const auto run = run_to_blowup(cfg);
  CHECK(run.report.node_steps <= predicted_node_steps(run.report.t_end, cfg.dr, 1.0, 3.0));
  cfg.step.window_behind = 0.0;
  const auto full = run_to_blowup(cfg);
  CHECK(full.report.node_steps <= predicted_node_steps(full.report.t_end, cfg.dr, 1.0, 0.0));
}

TEST_CASE("blowup time extrapolation") {
  CHECK_FALSE(extrapolate_blowup({}).has_value());
  CHECK_FALSE(extrapolate_blowup({{50.0, 3.0}}).has_value());
  // T(L) = 10 - 20 / L
  const auto t = extrapolate_blowup({{50.0, 9.6}, {200.0, 9.9}, {800.0, 9.975}});
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(*t >= 9.975);
}
