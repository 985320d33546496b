#include "qwblow/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "qwblow/blowup_oracle.hpp"
#include "qwblow/lifespan.hpp"
#include "qwblow/numerics.hpp"
#include "qwblow/profile_solver.hpp"
#include "qwblow/wave_solver.hpp"

namespace qwblow {

InitialData reference_data(double amplitude) {
  return {RadialProfile::poly_bump(4, amplitude, 1.0), RadialProfile::zero(1.0)};
}

FoldEquivalence fold_equivalence(const RadiationField& field, double tau0_factor) {
  FoldEquivalence out;
  out.tau0 = tau0(field).tau0 * tau0_factor;
  out.fold_min = min_fold_time(field, 10001).tau_min;
  out.rel_err = std::abs(out.tau0 - out.fold_min) / out.fold_min;
  out.pass = out.rel_err <= 1e-6;
  return out;
}

ResidualOrder profile_residual_order(const RadiationField& field, double tau, double h) {
  const double M = field.support();
  std::vector<double> q(401);
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = -1.2 * M + 2.2 * M * static_cast<double>(i) / static_cast<double>(q.size() - 1);
  }
  ResidualOrder out;
  out.tau = tau;
  out.h = h;
  out.residual_h = pde_residual(field, tau, q, h);
  out.residual_h2 = pde_residual(field, tau, q, 0.5 * h);
  out.order = std::log2(out.residual_h / out.residual_h2);
  out.pass = out.order >= 1.8;
  return out;
}

namespace {

void integrate_V(const std::vector<double>& w, double dq, std::vector<double>& V) {
  // V(q) = -int_q^M w, trapezoid from the right end.
  const std::size_t n = w.size();
  V[n - 1] = 0.0;
  for (std::size_t j = n - 1; j-- > 0;) V[j] = V[j + 1] - 0.5 * dq * (w[j] + w[j + 1]);
}

}  // namespace

UpwindProfile upwind_profile(const RadiationField& field, double tau, int nodes, double cfl) {
  if (nodes < 3) throw InputError("upwind_profile: need at least 3 nodes");
  if (!(tau >= 0.0)) throw InputError("upwind_profile: tau must be >= 0");
  const double M = field.support();
  const double qL = -M - 2.0;
  const std::size_t n = static_cast<std::size_t>(nodes);
  const double dq = (M - qL) / static_cast<double>(n - 1);
  UpwindProfile out;
  out.q.resize(n);
  out.w.resize(n);
  out.V.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.q[j] = qL + static_cast<double>(j) * dq;
    out.w[j] = field.dF(out.q[j]);
  }
  std::vector<double> a(n), next(n);
  double t = 0.0;
  while (t < tau) {
    integrate_V(out.w, dq, out.V);
    double amax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      a[j] = 0.5 * (out.V[j] - out.w[j]);
      amax = std::max(amax, std::abs(a[j]));
    }
    double dtau = amax > 0.0 ? cfl * dq / amax : tau - t;
    if (t + dtau > tau) dtau = tau - t;
    for (std::size_t j = 0; j < n; ++j) {
      const double left = j ? out.w[j - 1] : 0.0;
      const double right = j + 1 < n ? out.w[j + 1] : 0.0;
      const double grad = a[j] > 0.0 ? out.w[j] - left : right - out.w[j];
      next[j] = out.w[j] - dtau * a[j] * grad / dq;
    }
    out.w.swap(next);
    t += dtau;
    ++out.steps;
  }
  integrate_V(out.w, dq, out.V);
  out.tau = tau;
  return out;
}

UpwindComparison fan_vs_upwind(const RadiationField& field, double tau, int nodes) {
  const ProfileEvaluator eval(field, tau);
  auto error = [&](int n) {
    const auto up = upwind_profile(field, tau, n);
    double err = 0.0;
    for (std::size_t j = 0; j < up.q.size(); ++j) {
      err = std::max(err, std::abs(up.V[j] - eval.at(up.q[j]).V));
    }
    return err;
  };
  UpwindComparison out;
  out.tau = tau;
  out.err_coarse = error(nodes);
  out.err_fine = error(2 * nodes - 1);
  out.order = std::log2(out.err_coarse / out.err_fine);
  double vmax = 0.0;
  for (double v : eval.fan().V) vmax = std::max(vmax, std::abs(v));
  out.pass = out.order >= 0.8 && out.err_fine < 1e-2 * vmax;
  return out;
}

ConvergenceStudy linear_convergence(const InitialData& data, double h, double t_end) {
  ConvergenceStudy out;
  const double M = data.support();
  for (double dr : {4.0 * h, 2.0 * h, h}) {
    StepOptions opts;
    opts.frozen_coefficients = true;
    opts.fixed_dt = 0.5 * dr;
    auto state = init_state(data, 1.0, dr, t_end + M + 2.0, opts);
    const long n_steps = std::lround(t_end / opts.fixed_dt);
    for (long k = 0; k < n_steps; ++k) step(state, opts);
    double err = 0.0;
    for (std::size_t i = state.offset; i < state.end(); ++i) {
      const double r = state.r(i);
      if (r > t_end + M + 1.0) break;
      const auto exact = linear_wave(data, state.t, r);
      err = std::max(err, std::abs(state.at(static_cast<std::ptrdiff_t>(i)) - exact.R));
    }
    out.dr.push_back(dr);
    out.err.push_back(err);
  }
  out.order = std::log2(out.err[1] / out.err[2]);
  out.pass = out.order >= 1.9;
  return out;
}

RadiationLimit radiation_limit_probe(const InitialData& data, const std::vector<double>& times) {
  const RadiationField field(data);
  const double M = data.support();
  RadiationLimit out;
  out.times = times;
  std::vector<double> lt, le, lw;
  for (double t : times) {
    double err = 0.0, errw = 0.0;
    constexpr int kNodes = 401;
    for (int k = 0; k < kNodes; ++k) {
      const double q = -M + 2.0 * M * k / (kNodes - 1);
      const double r = t + q;
      const auto lw0 = linear_wave(data, t, r);
      const double F = field.F(q);
      err = std::max(err, std::abs(lw0.R - F));
      errw = std::max(errw, std::abs((1.0 + t) * lw0.w0 - F));
    }
    out.err.push_back(err);
    out.err_weighted.push_back(errw);
    lt.push_back(std::log(t));
    // a vanishing error has no slope; log of zero is kept out of the fit
    le.push_back(std::log(std::max(err, 1e-300)));
    lw.push_back(std::log(std::max(errw, 1e-300)));
  }
  out.slope = numerics::fit_slope(lt, le);
  out.slope_weighted = numerics::fit_slope(lt, lw);
  out.pass = std::abs(out.slope + 1.0) <= 0.1;
  return out;
}

JaWindow ja_window(const RadiationField& field, double epsilon, double tau0, double b_frac,
                   int n_times) {
  if (n_times < 2) throw InputError("ja_window: need at least two times");
  const double t_lo = 2.0 / epsilon;
  const double t_hi = std::expm1(b_frac * tau0 / epsilon);
  if (!(t_hi > t_lo)) throw InputError("ja_window: empty window, epsilon too large");
  std::vector<double> times(static_cast<std::size_t>(n_times));
  for (int k = 0; k < n_times; ++k) {
    times[static_cast<std::size_t>(k)] = t_lo * std::pow(t_hi / t_lo, double(k) / (n_times - 1));
  }
  JaWindow out;
  out.epsilon = epsilon;
  const ApproxSolution apx(field, epsilon, tau0);
  out.probe = ja_scaling_probe(apx, times);
  out.sup = *std::max_element(out.probe.sup_ja.begin(), out.probe.sup_ja.end());
  return out;
}

JaHalving ja_halving(const RadiationField& field, double epsilon, double tau0, double b_frac,
                     int n_times) {
  const double t_lo = 4.0 / epsilon;
  const double t_hi = std::expm1(b_frac * tau0 / epsilon);
  if (!(t_hi > t_lo)) throw InputError("ja_halving: the two windows do not overlap");
  JaHalving out;
  out.epsilon = epsilon;
  for (int k = 0; k < n_times; ++k) {
    out.times.push_back(t_lo * std::pow(t_hi / t_lo, double(k) / (n_times - 1)));
  }
  const ApproxSolution full(field, epsilon, tau0);
  const ApproxSolution half(field, 0.5 * epsilon, tau0);
  for (double t : out.times) {
    out.sup_eps.push_back(sup_ja(full, t));
    out.sup_half.push_back(sup_ja(half, t));
  }
  out.factor = *std::max_element(out.sup_eps.begin(), out.sup_eps.end()) /
               *std::max_element(out.sup_half.begin(), out.sup_half.end());
  out.factor_own_windows = ja_window(field, epsilon, tau0, b_frac, n_times).sup /
                           ja_window(field, 0.5 * epsilon, tau0, b_frac, n_times).sup;
  out.pass = out.factor >= 3.0 && out.factor <= 9.0;
  return out;
}

RiccatiBatch riccati_property_batch(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  auto poly = [](std::vector<double> c) {
    return [c = std::move(c)](double t) {
      double acc = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
      return acc;
    };
  };
  RiccatiBatch out;
  for (int k = 0; k < n; ++k) {
    RiccatiInstance inst;
    inst.T = uni(0.5, 3.0);
    // a0 >= 0 on [0, T]: non-negative coefficients in t
    inst.a0 = poly({uni(0.0, 2.0), uni(0.0, 1.0), uni(0.0, 0.5)});
    inst.a1 = poly({uni(-1.0, 1.0), uni(-1.0, 1.0), uni(-0.5, 0.5)});
    inst.a2 = poly({uni(-1.0, 1.0), uni(-1.0, 1.0), uni(-0.5, 0.5)});
    inst.w0 = uni(0.5, 10.0);
    const auto bound = riccati_bound(inst);
    ++out.instances;
    if (!bound.certified) continue;
    ++out.certified;
    const auto run = riccati_integrate(inst);
    if (!run.blew_up || run.t_blow > inst.T * (1.0 + 1e-9)) {
      ++out.counterexamples;
    } else {
      out.worst_ratio = std::max(out.worst_ratio, run.t_blow / inst.T);
    }
  }
  out.pass = out.counterexamples == 0 && out.certified > 0;
  return out;
}

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

template <class Fn>
CheckResult timed(const std::string& name, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r;
  r.name = name;
  try {
    fn(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

std::vector<CheckResult> run_selftest(const SelftestOptions& opts) {
  const RadiationField field(reference_data());
  std::vector<CheckResult> out;
  out.push_back(timed("fold/tau0 equivalence", [&](CheckResult& r) {
    const auto f = fold_equivalence(field, opts.tau0_factor);
    r.pass = f.pass;
    r.detail = fmt("tau0 %.12f  fold %.12f  rel %.2e", f.tau0, f.fold_min, f.rel_err);
  }));
  out.push_back(timed("profile residual order", [&](CheckResult& r) {
    const double t0 = tau0(field).tau0;
    const auto p = profile_residual_order(field, 0.4 * t0);
    r.pass = p.pass;
    r.detail = fmt("res(h) %.3e  res(h/2) %.3e  order %.3f", p.residual_h, p.residual_h2, p.order);
  }));
  out.push_back(timed("linear solver convergence", [&](CheckResult& r) {
    const auto c = linear_convergence(reference_data());
    r.pass = c.pass;
    r.detail = fmt("err %.3e %.3e  order %.3f", c.err[1], c.err[2], c.order);
  }));
  out.push_back(timed("riccati property batch", [&](CheckResult& r) {
    const auto b = riccati_property_batch(opts.riccati_instances, opts.seed);
    r.pass = b.pass;
    r.detail = fmt("instances %.0f  certified %.0f  counterexamples %.0f", b.instances,
                   b.certified, b.counterexamples);
  }));
  return out;
}

}  // namespace qwblow
