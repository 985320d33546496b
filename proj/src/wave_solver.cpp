#include "qwblow/wave_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qwblow/errors.hpp"

namespace qwblow {

namespace {

// Distance kept between the front of the data support and the last updated node.
constexpr double kFrontMargin = 0.5;
// Stored nodes below the window are dropped in chunks of this size.
constexpr std::size_t kTrimChunk = 8192;

// Fields at a single node of the current level.
PointFields node_fields(const WaveState& s, std::ptrdiff_t i, bool frozen) {
  const double dr = s.dr;
  const double r = s.r(static_cast<std::size_t>(i));
  const double Uc = s.at(i), Um = s.at(i - 1), Up = s.at(i + 1);
  const double Vc = s.prev_at(i), Vm = s.prev_at(i - 1), Vp = s.prev_at(i + 1);
  const double Ut = (Uc - Vc) / s.dt;
  const double Ur = (Up - Um) / (2.0 * dr);
  const double Urr = (Up - 2.0 * Uc + Um) / (dr * dr);
  const double Utr = (Ur - (Vp - Vm) / (2.0 * dr)) / s.dt;
  PointFields f;
  f.r = r;
  f.u = Uc / r;
  f.dtu = Ut / r;
  f.dru = (Ur - f.u) / r;
  const double c2 = frozen ? 1.0 : 1.0 + f.u + f.dtu;
  f.c = std::sqrt(std::max(c2, 0.0));
  f.w1 = Utr - f.c * Urr;
  f.w2 = Utr + f.c * Urr;
  f.L1u = f.dtu + f.c * f.dru;
  f.L2u = f.dtu - f.c * f.dru;
  return f;
}

PointFields lerp(const PointFields& a, const PointFields& b, double x, double r) {
  auto mix = [x](double p, double q) { return p + x * (q - p); };
  PointFields f;
  f.r = r;
  f.u = mix(a.u, b.u);
  f.dtu = mix(a.dtu, b.dtu);
  f.dru = mix(a.dru, b.dru);
  f.c = mix(a.c, b.c);
  f.w1 = mix(a.w1, b.w1);
  f.w2 = mix(a.w2, b.w2);
  f.L1u = mix(a.L1u, b.L1u);
  f.L2u = mix(a.L2u, b.L2u);
  return f;
}

std::size_t first_valid(const WaveState& s) { return s.lo == 0 ? 0 : s.lo + 1; }

}  // namespace

double WaveState::at(std::ptrdiff_t i) const {
  if (i < 0) return -U[0];
  const auto k = static_cast<std::size_t>(i);
  if (k >= end()) return 0.0;
  if (k < offset) throw std::logic_error("wave_state: node below stored window");
  return U[k - offset];
}

double WaveState::prev_at(std::ptrdiff_t i) const {
  if (i < 0) return -U_prev[0];
  const auto k = static_cast<std::size_t>(i);
  if (k >= end()) return 0.0;
  if (k < offset) throw std::logic_error("wave_state: node below stored window");
  return U_prev[k - offset];
}

WaveState init_state(const InitialData& data, double epsilon, double dr, double R_max,
                     const StepOptions& opts) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InputError("wave_solver: epsilon must be positive");
  if (!(dr > 0.0) || !std::isfinite(dr)) throw InputError("wave_solver: dr must be positive");
  const double M = data.support();
  if (!(R_max >= M + kFrontMargin + 4.0 * dr)) {
    throw InputError("wave_solver: R_max must exceed the data support");
  }
  WaveState s;
  s.dr = dr;
  s.epsilon = epsilon;
  s.support = M;
  s.R_max = R_max;
  s.front = static_cast<std::size_t>(std::ceil((M + kFrontMargin) / dr));
  const std::size_t n = s.front + 1;
  s.U.assign(n, 0.0);
  s.U_prev.assign(n, 0.0);

  double c2_max = 1.0;
  std::vector<double> c2(n, 1.0), Urr(n, 0.0), Ut(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = s.r(i);
    const Jet a = data.u0.jet(r);
    const double b = data.u1(r);
    s.U[i] = epsilon * r * a.value;
    Ut[i] = epsilon * r * b;
    Urr[i] = epsilon * (2.0 * a.d1 + r * a.d2);
    if (!opts.frozen_coefficients) c2[i] = 1.0 + epsilon * (a.value + b);
    c2_max = std::max(c2_max, c2[i]);
  }
  const double dt = opts.fixed_dt > 0.0 ? opts.fixed_dt : opts.cfl * dr / std::sqrt(c2_max);
  for (std::size_t i = 0; i < n; ++i) {
    s.U_prev[i] = s.U[i] - dt * Ut[i] + 0.5 * dt * dt * c2[i] * Urr[i];
  }
  s.dt = dt;
  s.c2_max = c2_max;
  return s;
}

StepDiagnostics step(WaveState& s, const StepOptions& opts) {
  const double dr = s.dr;
  const double dt_old = s.dt;
  const double dt = opts.fixed_dt > 0.0 ? opts.fixed_dt : opts.cfl * dr / std::sqrt(s.c2_max);

  // Extend the updated range to the new front and pull the trailing window forward.
  const double front_r = s.t + dt + s.support + kFrontMargin;
  if (front_r > s.R_max) throw NumericalError("wave_solver: solution front reached R_max");
  s.front = std::max(s.front, static_cast<std::size_t>(std::ceil(front_r / dr)));
  if (s.end() < s.front + 1) {
    s.U.resize(s.front + 1 - s.offset, 0.0);
    s.U_prev.resize(s.front + 1 - s.offset, 0.0);
  }
  if (opts.window_behind > 0.0) {
    const double lo_r = s.t - opts.window_behind;
    if (lo_r > 0.0) s.lo = std::max(s.lo, static_cast<std::size_t>(lo_r / dr));
    if (s.lo > s.offset + kTrimChunk + 2) {
      const std::size_t drop = s.lo - 2 - s.offset;
      s.U.erase(s.U.begin(), s.U.begin() + static_cast<std::ptrdiff_t>(drop));
      s.U_prev.erase(s.U_prev.begin(), s.U_prev.begin() + static_cast<std::ptrdiff_t>(drop));
      s.offset += drop;
    }
  }
  const std::size_t n = s.U.size();
  s.work.resize(n);

  const double ratio = dt / dt_old;
  const double coef = 0.5 * dt * (dt + dt_old) / (dr * dr);
  const double inv_dr2 = 1.0 / (dr * dr);
  const double inv_2dr_dt = 1.0 / (2.0 * dr * dt_old);
  const double inv_dt = 1.0 / dt_old;
  const bool frozen = opts.frozen_coefficients;

  const double* U = s.U.data();
  const double* V = s.U_prev.data();
  double* W = s.work.data();

  double max_w1 = 0.0, max_w2 = 0.0;
  double min_c2 = std::numeric_limits<double>::infinity();
  double max_c2 = 1.0;

  auto update = [&](std::size_t k, std::size_t gi, double Um, double Vm) {
    const double Uc = U[k], Up = U[k + 1];
    const double Vc = V[k], Vp = V[k + 1];
    const double inv_r = 1.0 / ((static_cast<double>(gi) + 0.5) * dr);
    const double lap = Up - 2.0 * Uc + Um;
    const double c2 = frozen ? 1.0 : 1.0 + Uc * inv_r + (Uc - Vc) * inv_r * inv_dt;
    W[k] = Uc + ratio * (Uc - Vc) + coef * c2 * lap;
    const double utr = ((Up - Um) - (Vp - Vm)) * inv_2dr_dt;
    const double c = std::sqrt(std::max(c2, 0.0));
    const double crr = c * lap * inv_dr2;
    max_w1 = std::max(max_w1, std::abs(utr - crr));
    max_w2 = std::max(max_w2, std::abs(utr + crr));
    min_c2 = std::min(min_c2, c2);
    max_c2 = std::max(max_c2, c2);
  };

  const std::size_t k_lo = s.lo - s.offset;
  const std::size_t k_hi = s.front - s.offset;  // exclusive; node front stays zero
  std::size_t k = k_lo;
  if (s.lo == 0) {
    update(0, 0, -U[0], -V[0]);
    k = 1;
  }
  for (; k < k_hi; ++k) update(k, s.offset + k, U[k - 1], V[k - 1]);
  for (std::size_t j = 0; j < k_lo; ++j) W[j] = U[j];
  for (std::size_t j = k_hi; j < n; ++j) W[j] = 0.0;

  StepDiagnostics d;
  d.t = s.t;
  d.max_abs_w1 = max_w1;
  d.max_abs_w2 = max_w2;
  d.min_c2 = min_c2;
  d.max_c2 = max_c2;
  d.finite = std::isfinite(max_w1) && std::isfinite(max_w2) && std::isfinite(min_c2) &&
             std::isfinite(max_c2);

  std::swap(s.U_prev, s.U);
  std::swap(s.U, s.work);
  s.t += dt;
  s.dt = dt;
  if (std::isfinite(max_c2)) s.c2_max = max_c2;
  return d;
}

RiemannFields riemann_quantities(const WaveState& s, bool frozen) {
  RiemannFields out;
  const std::size_t first = std::max(first_valid(s), s.offset == 0 ? std::size_t{0} : s.offset + 1);
  out.first = first;
  for (std::size_t i = first; i < s.front; ++i) {
    const PointFields f = node_fields(s, static_cast<std::ptrdiff_t>(i), frozen);
    out.r.push_back(f.r);
    out.w1.push_back(f.w1);
    out.w2.push_back(f.w2);
    out.L1u.push_back(f.L1u);
    out.L2u.push_back(f.L2u);
    out.dtu.push_back(f.dtu);
    out.dru.push_back(f.dru);
    out.u.push_back(f.u);
    out.c.push_back(f.c);
  }
  return out;
}

std::optional<PointFields> sample_fields(const WaveState& s, double r, bool frozen) {
  if (!(r >= 0.0) || !std::isfinite(r)) return std::nullopt;
  const double x = r / s.dr - 0.5;
  if (x >= static_cast<double>(s.front)) {
    PointFields f;
    f.r = r;
    return f;
  }
  if (x <= 0.0) {
    if (s.lo != 0) return std::nullopt;
    PointFields f = node_fields(s, 0, frozen);
    f.r = r;
    return f;
  }
  const auto i = static_cast<std::size_t>(x);
  if (i < first_valid(s)) return std::nullopt;
  const PointFields a = node_fields(s, static_cast<std::ptrdiff_t>(i), frozen);
  const PointFields b = node_fields(s, static_cast<std::ptrdiff_t>(i + 1), frozen);
  return lerp(a, b, x - static_cast<double>(i), r);
}

CharacteristicTracker::CharacteristicTracker(double lambda, int sign, int sample_stride)
    : lambda_(lambda),
      target_sign_(sign >= 0 ? 1 : -1),
      sign_(target_sign_),
      stride_(std::max(1, sample_stride)),
      r_(lambda) {
  if (!std::isfinite(lambda)) throw InputError("tracker: lambda must be finite");
  if (target_sign_ < 0 && lambda < 0.0) throw InputError("tracker: incoming path needs lambda >= 0");
  if (target_sign_ > 0 && lambda < 0.0) {
    r_ = -lambda;
    sign_ = -1;
  }
}

void CharacteristicTracker::begin_step(const WaveState& before, bool frozen) {
  if (!alive_) return;
  const auto f = sample_fields(before, r_, frozen);
  if (!f) {
    alive_ = false;
    return;
  }
  if (steps_ % stride_ == 0) samples_.push_back({before.t, *f});
  k1_ = sign_ * f->c;
}

void CharacteristicTracker::end_step(const WaveState& after, bool frozen) {
  if (!alive_) return;
  ++steps_;
  const double dt = after.dt;
  const double r_pred = r_ + dt * k1_;
  const auto f = sample_fields(after, std::abs(r_pred), frozen);
  if (!f) {
    alive_ = false;
    return;
  }
  r_ += 0.5 * dt * (k1_ + sign_ * f->c);
  if (r_ <= 0.0) {
    if (target_sign_ < 0) {
      alive_ = false;
      return;
    }
    r_ = -r_;
    sign_ = 1;
  }
}

std::vector<PathSample> track_characteristic(const std::vector<WaveState>& history, double lambda,
                                             int sign, bool frozen) {
  CharacteristicTracker tr(lambda, sign, 1);
  for (std::size_t k = 0; k + 1 < history.size() && tr.alive(); ++k) {
    tr.begin_step(history[k], frozen);
    tr.end_step(history[k + 1], frozen);
  }
  auto samples = tr.samples();
  if (tr.alive() && !history.empty()) {
    if (auto f = sample_fields(history.back(), tr.r(), frozen)) samples.push_back({history.back().t, *f});
  }
  return samples;
}

void MonitorAccumulator::update(const WaveState& s, double r_lo, double r_hi, bool frozen) {
  if (s.t < t_start_ || !(r_hi > r_lo)) return;
  const double x_lo = std::max(r_lo / s.dr - 0.5, static_cast<double>(first_valid(s)));
  const auto i_lo = static_cast<std::size_t>(std::ceil(x_lo));
  const double x_hi = std::min(r_hi / s.dr - 0.5, static_cast<double>(s.front) - 1.0);
  if (x_hi < static_cast<double>(i_lo)) return;
  const auto i_hi = static_cast<std::size_t>(x_hi);
  const double t32 = s.t * std::sqrt(s.t);
  double integral = 0.0;
  double b = 0.0, c = 0.0, d = 0.0;
  for (std::size_t i = i_lo; i <= i_hi; ++i) {
    const PointFields f = node_fields(s, static_cast<std::ptrdiff_t>(i), frozen);
    const double w = (i == i_lo || i == i_hi) ? 0.5 : 1.0;
    integral += w * std::abs(f.w1) * s.dr;
    b = std::max(b, std::abs(f.dtu));
    c = std::max(c, std::abs(f.w2));
    d = std::max(d, std::abs(f.L1u));
  }
  current_.t = s.t;
  current_.A = std::max(current_.A, integral);
  current_.B = std::max(current_.B, s.t * b);
  current_.C = std::max(current_.C, t32 * c);
  current_.D = std::max(current_.D, t32 * d);
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::threshold:
      return "threshold";
    case Termination::hyperbolicity_loss:
      return "hyperbolicity_loss";
    case Termination::horizon:
      return "horizon";
    case Termination::nan:
      return "nan";
    case Termination::budget:
      return "budget";
  }
  return "unknown";
}

double predicted_node_steps(double t_end, double dr, double support, double window, double cfl,
                            double c_max) {
  const double steps = t_end * c_max / (cfl * dr);
  // full domain grows linearly with t, so the average width is half the final one
  const double width = window > 0.0 ? std::min(window, t_end) + support + kFrontMargin
                                     : 0.5 * t_end + support + kFrontMargin;
  return steps * width / dr;
}

std::optional<double> extrapolate_blowup(const std::vector<ThresholdCrossing>& crossings) {
  if (crossings.size() < 2) return std::nullopt;
  const auto& a = crossings[crossings.size() - 2];
  const auto& b = crossings.back();
  if (!(b.threshold > a.threshold)) return std::nullopt;
  return (b.threshold * b.t - a.threshold * a.t) / (b.threshold - a.threshold);
}

RunResult run_to_blowup(const RunConfig& cfg) {
  if (!(cfg.t_max > 0.0) || !std::isfinite(cfg.t_max)) throw InputError("run: t_max must be positive");
  if (cfg.thresholds.empty()) throw InputError("run: at least one threshold is required");
  for (std::size_t i = 0; i < cfg.thresholds.size(); ++i) {
    if (!(cfg.thresholds[i] > 0.0) || (i > 0 && !(cfg.thresholds[i] > cfg.thresholds[i - 1]))) {
      throw InputError("run: thresholds must be positive and strictly increasing");
    }
  }
  if (cfg.record_stride < 1 || cfg.path_stride < 1) throw InputError("run: strides must be >= 1");
  const double M = cfg.data.support();
  const double need = cfg.t_max + M + kFrontMargin + 1.0;
  const double R_max = cfg.R_max > 0.0 ? cfg.R_max : need;
  if (R_max < need) throw InputError("run: R_max too small for the requested horizon");

  const bool frozen = cfg.step.frozen_coefficients;
  WaveState state = init_state(cfg.data, cfg.epsilon, cfg.dr, R_max, cfg.step);

  RunResult res;
  res.report.epsilon = cfg.epsilon;
  res.report.dr = cfg.dr;
  if (cfg.rho0) {
    res.paths.emplace_back(*cfg.rho0 - 1.0, 1, cfg.path_stride);
    res.paths.emplace_back(M, 1, cfg.path_stride);
    res.paths.emplace_back(*cfg.rho0, 1, cfg.path_stride);
  }
  for (const auto& [lambda, sign] : cfg.extra_paths) res.paths.emplace_back(lambda, sign, cfg.path_stride);
  MonitorAccumulator monitors(1.0 / cfg.epsilon);

  std::size_t next = 0;
  double prev_t = 0.0, prev_w1 = 0.0;
  double next_snapshot = cfg.snapshot_every > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  long steps = 0;
  double node_steps = 0.0;
  Termination cause = Termination::horizon;
  StepDiagnostics d;

  auto push_row = [&](const StepDiagnostics& diag) {
    const auto& m = monitors.current();
    res.rows.push_back({diag.t, diag.max_abs_w1, diag.max_abs_w2, diag.min_c2, m.A, m.B, m.C, m.D});
    res.report.w1_history.emplace_back(diag.t, diag.max_abs_w1);
  };

  while (true) {
    const bool record = steps % cfg.record_stride == 0;
    if (record && cfg.rho0 && res.paths[0].alive() && res.paths[1].alive()) {
      monitors.update(state, res.paths[0].r(), res.paths[1].r(), frozen);
    }
    if (state.t >= next_snapshot && cfg.on_snapshot) {
      cfg.on_snapshot(state);
      next_snapshot += cfg.snapshot_every;
    }
    for (auto& p : res.paths) p.begin_step(state, frozen);
    d = step(state, cfg.step);
    for (auto& p : res.paths) p.end_step(state, frozen);
    ++steps;

    if (!d.finite) {
      cause = Termination::nan;
      break;
    }
    while (next < cfg.thresholds.size() && d.max_abs_w1 >= cfg.thresholds[next]) {
      const double lam = cfg.thresholds[next];
      double tc = d.t;
      if (steps > 1 && d.max_abs_w1 > prev_w1 && prev_w1 < lam) {
        tc = prev_t + (lam - prev_w1) / (d.max_abs_w1 - prev_w1) * (d.t - prev_t);
      }
      res.report.crossings.push_back({lam, tc});
      ++next;
    }
    if (record) push_row(d);
    if (next == cfg.thresholds.size()) {
      cause = Termination::threshold;
      break;
    }
    if (d.min_c2 <= cfg.step.c2_floor) {
      cause = Termination::hyperbolicity_loss;
      break;
    }
    node_steps += static_cast<double>(state.front - state.lo);
    if (cfg.max_node_steps > 0.0 && node_steps >= cfg.max_node_steps) {
      cause = Termination::budget;
      break;
    }
    if (state.t >= cfg.t_max) break;
    prev_t = d.t;
    prev_w1 = d.max_abs_w1;
  }
  if (res.rows.empty() || res.rows.back().t != d.t) push_row(d);

  res.report.cause = cause;
  res.report.t_end = d.t;
  res.report.steps = steps;
  res.report.node_steps = node_steps;
  res.report.T_star = extrapolate_blowup(res.report.crossings);
  const bool ended_early = cause == Termination::hyperbolicity_loss || cause == Termination::nan;
  if (!res.report.T_star && ended_early) res.report.T_star = d.t;
  res.monitors = monitors.current();
  return res;
}

}  // namespace qwblow
