#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qwblow/blowup_oracle.hpp"
#include "qwblow/config.hpp"
#include "qwblow/lifespan.hpp"
#include "qwblow/wave_solver.hpp"

namespace qwblow {

/// Data, radiation field and lifespan estimate shared by every run of one config.
struct Experiment {
  Config config;
  BuiltData built;
  RadiationField field;
  LifespanEstimate lifespan;

  explicit Experiment(Config cfg);
  [[nodiscard]] double rho0() const;
  /// exp(2 tau0 / eps), or solver.t_max when that is set.
  [[nodiscard]] double horizon(double epsilon) const;
  /// Solver settings for one run at this epsilon and grid step.
  [[nodiscard]] RunConfig run_config(double epsilon, double dr) const;
};

struct SweepRow {
  double epsilon = 0.0;
  std::optional<double> T_num;
  std::optional<double> eps_ln_T;
  double tau0_ref = 0.0;
  double dr = 0.0;
  Termination cause = Termination::horizon;
  double t_end = 0.0;
  double seconds = 0.0;
};

/// d_k = |eps_k ln T_k - tau0| in row order and the number of increases between consecutive
/// rows. Rows without T_num break the sequence and are counted as missing.
struct TrendStatistic {
  std::vector<double> d;
  int violations = 0;
  int missing = 0;
};
TrendStatistic trend_statistic(const std::vector<SweepRow>& rows);

struct SweepResult {
  std::vector<SweepRow> rows;  // descending epsilon
  double tau0_ref = 0.0;
  double predicted_node_steps = 0.0;
  TrendStatistic trend;
  std::vector<RunResult> runs;  // kept only on request, same order as rows
};

struct SweepOptions {
  std::optional<double> dr;  // overrides solver.dr
  bool keep_runs = false;
  std::function<void(const SweepRow&)> on_row;
};

/// Node updates the guard charges for one run: up to min(horizon, exp(1.5 tau0 / eps)).
double sweep_run_cost(const Experiment& ex, double epsilon, double dr);

/// One run per epsilon, rows in descending epsilon. Throws InputError up front when the
/// predicted cost exceeds sweep.budget.
SweepResult run_sweep(const Experiment& ex, const SweepOptions& opts = {});

std::string sweep_csv(const SweepResult& result);

/// Certificate along the rho0 path of a run made with Experiment::run_config.
Certificate certify_run(const Experiment& ex, const RunResult& run, double epsilon);

}  // namespace qwblow
