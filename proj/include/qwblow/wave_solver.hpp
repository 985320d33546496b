#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qwblow/radiation_field.hpp"

namespace qwblow {

/// Discretised U = r u for the reduced equation U_tt - c^2 U_rr = 0, c^2 = 1 + u + u_t.
///
/// Nodes sit at r_i = (i + 1/2) dr (global index i >= 0). Only the slice
/// [offset, offset + U.size()) is stored; nodes at or beyond `front` are zero by finite
/// propagation speed, nodes below `lo` are frozen when a trailing window is in use.
struct WaveState {
  double t = 0.0;
  double dr = 0.0;
  double dt = 0.0;        // time step that produced the current level from U_prev
  double epsilon = 0.0;
  double support = 0.0;   // M of the data
  double R_max = 0.0;
  std::size_t offset = 0;
  std::size_t lo = 0;     // first updated node
  std::size_t front = 0;  // first node known to be zero
  std::vector<double> U;
  std::vector<double> U_prev;
  double c2_max = 1.0;    // largest c^2 seen on the last sweep, drives the next dt
  std::vector<double> work;

  [[nodiscard]] double r(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dr; }
  /// U at global node i, zero outside storage on the right, odd ghost at the origin.
  [[nodiscard]] double at(std::ptrdiff_t i) const;
  [[nodiscard]] double prev_at(std::ptrdiff_t i) const;
  [[nodiscard]] std::size_t end() const { return offset + U.size(); }
};

struct StepOptions {
  double cfl = 0.8;
  double c2_floor = 0.25;
  double window_behind = 0.0;    // > 0: freeze nodes with r < t - window_behind
  bool frozen_coefficients = false;  // c == 1 (linear test mode)
  double fixed_dt = 0.0;         // > 0 overrides the CFL step
};

/// Grid-wide diagnostics of one level, all taken at the level the step started from.
struct StepDiagnostics {
  double t = 0.0;
  double max_abs_w1 = 0.0;
  double max_abs_w2 = 0.0;
  double min_c2 = 1.0;
  double max_c2 = 1.0;
  bool finite = true;
};

/// Samples eps r u0 at the nodes and synthesises U_prev by a second-order Taylor start.
WaveState init_state(const InitialData& data, double epsilon, double dr, double R_max,
                     const StepOptions& opts = {});

/// One variable-step leapfrog update with lagged u_t in c^2.
StepDiagnostics step(WaveState& state, const StepOptions& opts = {});

/// Derived fields on the stored nodes of the current level.
struct RiemannFields {
  std::size_t first = 0;  // global index of element 0
  std::vector<double> r, w1, w2, L1u, L2u, dtu, dru, u, c;
};
RiemannFields riemann_quantities(const WaveState& state, bool frozen_coefficients = false);

/// The same fields at an arbitrary radius, linearly interpolated between nodes.
struct PointFields {
  double r = 0.0;
  double u = 0.0, dtu = 0.0, dru = 0.0;
  double c = 1.0, w1 = 0.0, w2 = 0.0, L1u = 0.0, L2u = 0.0;
};
std::optional<PointFields> sample_fields(const WaveState& state, double r,
                                         bool frozen_coefficients = false);

struct PathSample {
  double t = 0.0;
  PointFields f;
};

/// Integrates dr/dt = sign * c through the evolving grid by Heun's rule (one stage before
/// the grid step, one after). A plus-characteristic started at negative lambda first runs
/// inward from |lambda| and is reflected at the origin.
class CharacteristicTracker {
 public:
  CharacteristicTracker(double lambda, int sign, int sample_stride = 1);

  void begin_step(const WaveState& before, bool frozen = false);
  void end_step(const WaveState& after, bool frozen = false);

  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] int sign() const { return target_sign_; }
  [[nodiscard]] bool alive() const { return alive_; }
  [[nodiscard]] double r() const { return r_; }
  [[nodiscard]] const std::vector<PathSample>& samples() const { return samples_; }

 private:
  double lambda_;
  int target_sign_;
  int sign_;
  int stride_;
  long steps_ = 0;
  bool alive_ = true;
  double r_;
  double k1_ = 0.0;
  double t0_ = 0.0;
  std::vector<PathSample> samples_;
};

/// Offline tracking through a stored sequence of states (consecutive time levels).
std::vector<PathSample> track_characteristic(const std::vector<WaveState>& history, double lambda,
                                             int sign, bool frozen = false);

struct MonitorRecord {
  double t = 0.0;
  double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
};

/// Running suprema over the strip between two plus-characteristics, from t >= 1/eps.
class MonitorAccumulator {
 public:
  explicit MonitorAccumulator(double t_start) : t_start_(t_start) {}
  void update(const WaveState& state, double r_lo, double r_hi, bool frozen = false);
  [[nodiscard]] const MonitorRecord& current() const { return current_; }

 private:
  double t_start_;
  MonitorRecord current_;
};

struct ThresholdCrossing {
  double threshold = 0.0;
  double t = 0.0;
};

enum class Termination { threshold, hyperbolicity_loss, horizon, nan, budget };
std::string to_string(Termination t);

struct BlowupReport {
  double epsilon = 0.0;
  double dr = 0.0;
  std::vector<ThresholdCrossing> crossings;
  std::optional<double> T_star;
  Termination cause = Termination::horizon;
  double t_end = 0.0;
  long steps = 0;
  double node_steps = 0.0;
  std::vector<std::pair<double, double>> w1_history;  // (t, max|w1|) at the record stride
};

struct RunRow {
  double t, max_abs_w1, max_abs_w2, min_c2, A, B, C, D;
};

struct RunConfig {
  InitialData data;
  double epsilon = 0.0;
  double dr = 2e-3;
  double t_max = 100.0;
  double R_max = 0.0;  // 0: derived from t_max
  StepOptions step;
  std::vector<double> thresholds{50.0, 200.0, 800.0};
  std::optional<double> rho0;   // enables the monitor strip and the rho0 path
  std::vector<std::pair<double, int>> extra_paths;  // (lambda, sign)
  double max_node_steps = 0.0;  // > 0: hard cap on node updates, ends the run with cause budget
  int record_stride = 50;
  int path_stride = 4;
  double snapshot_every = 0.0;  // > 0: snapshot cadence in t
  std::function<void(const WaveState&)> on_snapshot;
};

struct RunResult {
  BlowupReport report;
  std::vector<RunRow> rows;
  std::vector<CharacteristicTracker> paths;  // rho0 - 1, M, rho0 first when rho0 is set
  MonitorRecord monitors;
};

/// Integrates until every threshold on max|w1| is crossed or a termination cause fires;
/// T_star extrapolates T(Lambda) = T_star - C / Lambda through the two largest crossings.
RunResult run_to_blowup(const RunConfig& cfg);

/// Node updates needed to reach t_end at step dr / (cfl / c_max) with a window of the given
/// width (0: full domain). Used by the budget guard; c_max = 1.5 keeps it conservative.
double predicted_node_steps(double t_end, double dr, double support, double window,
                            double cfl = 0.8, double c_max = 1.5);

/// T_star from the two largest crossings (nullopt with fewer than two).
std::optional<double> extrapolate_blowup(const std::vector<ThresholdCrossing>& crossings);

}  // namespace qwblow
