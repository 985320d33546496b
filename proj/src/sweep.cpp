#include "qwblow/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qwblow/errors.hpp"

namespace qwblow {

namespace {

// path samples kept per tracked characteristic, roughly
constexpr double kPathSamples = 1e5;
constexpr double kCostExponent = 1.5;

double guard_time(const Experiment& ex, double epsilon) {
  return std::min(ex.horizon(epsilon), std::exp(kCostExponent * ex.lifespan.tau0 / epsilon));
}

}  // namespace

Experiment::Experiment(Config cfg)
    : config(std::move(cfg)),
      built(build_data(config.data)),
      field(built.data),
      lifespan(tau0(field)) {}

double Experiment::rho0() const { return config.oracle.rho0.value_or(lifespan.s_star); }

double Experiment::horizon(double epsilon) const {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (config.solver.t_max > 0.0) return config.solver.t_max;
  return std::exp(2.0 * lifespan.tau0 / epsilon);
}

RunConfig Experiment::run_config(double epsilon, double dr) const {
  const auto& s = config.solver;
  RunConfig rc;
  rc.data = built.data;
  rc.epsilon = epsilon;
  rc.dr = dr;
  rc.t_max = horizon(epsilon);
  rc.R_max = s.R_max;
  rc.step.cfl = s.cfl;
  rc.step.c2_floor = s.c2_floor;
  rc.step.window_behind = s.window;
  rc.thresholds = s.thresholds;
  rc.rho0 = rho0();
  rc.max_node_steps = s.max_node_steps;
  rc.record_stride = s.record_stride;
  const double steps = rc.t_max * 1.5 / (s.cfl * dr);
  rc.path_stride = std::max(s.path_stride, static_cast<int>(std::ceil(steps / kPathSamples)));
  return rc;
}

TrendStatistic trend_statistic(const std::vector<SweepRow>& rows) {
  TrendStatistic out;
  std::optional<double> prev;
  for (const auto& row : rows) {
    if (!row.eps_ln_T) {
      ++out.missing;
      prev.reset();
      continue;
    }
    const double d = std::abs(*row.eps_ln_T - row.tau0_ref);
    out.d.push_back(d);
    if (prev && d > *prev) ++out.violations;
    prev = d;
  }
  return out;
}

double sweep_run_cost(const Experiment& ex, double epsilon, double dr) {
  const auto& s = ex.config.solver;
  double cost = predicted_node_steps(guard_time(ex, epsilon), dr, ex.built.data.support(),
                                     s.window, s.cfl);
  if (s.max_node_steps > 0.0) cost = std::min(cost, s.max_node_steps);
  return cost;
}

SweepResult run_sweep(const Experiment& ex, const SweepOptions& opts) {
  const double dr = opts.dr.value_or(ex.config.solver.dr);
  if (!(dr > 0.0)) throw InputError("sweep: dr must be positive");
  auto eps = ex.config.sweep.epsilons;
  std::sort(eps.begin(), eps.end(), std::greater<>());

  SweepResult out;
  out.tau0_ref = ex.lifespan.tau0;
  for (double e : eps) out.predicted_node_steps += sweep_run_cost(ex, e, dr);
  if (out.predicted_node_steps > ex.config.sweep.budget) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "sweep: predicted %.3g node updates exceed the budget %.3g",
                  out.predicted_node_steps, ex.config.sweep.budget);
    throw InputError(buf);
  }

  for (double e : eps) {
    const auto start = std::chrono::steady_clock::now();
    auto run = run_to_blowup(ex.run_config(e, dr));
    SweepRow row;
    row.epsilon = e;
    row.T_num = run.report.T_star;
    if (row.T_num && *row.T_num > 0.0) row.eps_ln_T = e * std::log(*row.T_num);
    row.tau0_ref = out.tau0_ref;
    row.dr = dr;
    row.cause = run.report.cause;
    row.t_end = run.report.t_end;
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (opts.on_row) opts.on_row(row);
    out.rows.push_back(row);
    if (opts.keep_runs) out.runs.push_back(std::move(run));
  }
  out.trend = trend_statistic(out.rows);
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "epsilon,T_num,eps_ln_T,tau0_ref,dr,cause\n";
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::string(buf);
  };
  for (const auto& r : result.rows) {
    out << num(r.epsilon) << ',' << (r.T_num ? num(*r.T_num) : "") << ','
        << (r.eps_ln_T ? num(*r.eps_ln_T) : "") << ',' << num(r.tau0_ref) << ',' << num(r.dr)
        << ',' << to_string(r.cause) << '\n';
  }
  return out.str();
}

Certificate certify_run(const Experiment& ex, const RunResult& run, double epsilon) {
  if (run.paths.size() < 3) throw InputError("certify: run has no rho0 path");
  CertifyOptions o;
  o.epsilon = epsilon;
  o.tau0 = ex.lifespan.tau0;
  o.rho0 = ex.rho0();
  o.mu = ex.config.oracle.mu;
  return certify_from_run(run.paths[2].samples(), ex.field, o);
}

}  // namespace qwblow
