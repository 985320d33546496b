#include "qwblow/profile_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qwblow/errors.hpp"
#include "qwblow/numerics.hpp"

namespace qwblow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double expm1_ratio(double x) {
  if (std::abs(x) < 1e-8) return 1.0 + 0.5 * x;
  return std::expm1(x) / x;
}

double dq_ds_from(double tau, double d1, double d2) {
  const double x = 0.5 * tau * d1;
  return std::exp(x) - 0.5 * tau * d2 * expm1_ratio(x);
}

// Integrands of the q, V and dV/dtau quadratures along the labels.
struct Integrands {
  double dq;
  double dV;
  double dD;
};

Integrands integrands(const RadiationField& field, double tau, double rho) {
  const auto [d1, d2] = field.slopes(rho);
  const double e = std::exp(0.5 * tau * d1);
  const double v = e * (d1 - d2);
  return {dq_ds_from(tau, d1, d2), v, 0.5 * d1 * v};
}

Integrands cell_integral(const RadiationField& field, double tau, double a, double b) {
  static constexpr double kNodes[2] = {0.3399810435848562648026658, 0.8611363115940525752239465};
  static constexpr double kWeights[2] = {0.6521451548625461426269361, 0.3478548451374538573730639};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Integrands acc{0.0, 0.0, 0.0};
  for (int i = 0; i < 2; ++i) {
    for (double sign : {-1.0, 1.0}) {
      const auto f = integrands(field, tau, mid + sign * half * kNodes[i]);
      acc.dq += kWeights[i] * f.dq;
      acc.dV += kWeights[i] * f.dV;
      acc.dD += kWeights[i] * f.dD;
    }
  }
  acc.dq *= half;
  acc.dV *= half;
  acc.dD *= half;
  return acc;
}

// q(tau, s) for s inside fan cell i.
double q_in_cell(const CharacteristicFan& fan, const RadiationField& field, std::size_t i,
                 double s) {
  return fan.q[i] +
         numerics::gauss_legendre4([&](double x) { return dq_ds(field, fan.tau, x); }, fan.s[i], s);
}

}  // namespace

double dq_ds(const RadiationField& field, double tau, double s) {
  const auto [d1, d2] = field.slopes(s);
  return dq_ds_from(tau, d1, d2);
}

CharacteristicFan characteristic_fan(const RadiationField& field, double tau, double s_min,
                                     int n) {
  const double M = field.support();
  if (!(tau >= 0.0)) throw InputError("characteristic_fan: tau must be non-negative");
  if (!(s_min < M)) throw InputError("characteristic_fan: s_min must be below M");
  if (n < 2) throw InputError("characteristic_fan: need at least two nodes");

  CharacteristicFan fan;
  fan.tau = tau;
  const auto N = static_cast<std::size_t>(n);
  fan.s.resize(N);
  fan.q.resize(N);
  fan.V.resize(N);
  fan.w.resize(N);
  fan.d2V.resize(N);
  fan.dsq.resize(N);
  fan.dVdtau_s.resize(N);
  const double h = (M - s_min) / (n - 1);
  for (std::size_t i = 0; i < N; ++i) fan.s[i] = s_min + h * static_cast<double>(i);
  fan.s.back() = M;

  double q = M;
  double I = 0.0;  // int_M^s exp(F' tau/2)(F' - F'')
  double D = 0.0;  // tau-derivative of I
  for (std::size_t j = N; j-- > 0;) {
    if (j + 1 < N) {
      const auto c = cell_integral(field, tau, fan.s[j], fan.s[j + 1]);
      q -= c.dq;
      I -= c.dV;
      D -= c.dD;
    }
    const auto [d1, d2] = field.slopes(fan.s[j]);
    fan.q[j] = q;
    fan.w[j] = d1;
    fan.V[j] = I + d1;
    fan.dVdtau_s[j] = D;
    fan.dsq[j] = dq_ds_from(tau, d1, d2);
    if (fan.dsq[j] > 0.0) {
      fan.d2V[j] = d2 / fan.dsq[j];
    } else {
      fan.d2V[j] = kInf;
      fan.monotone = false;
    }
  }
  for (std::size_t j = 1; j < N && fan.monotone; ++j) {
    if (!(fan.q[j] > fan.q[j - 1])) fan.monotone = false;
  }
  return fan;
}

CharacteristicFan characteristic_fan(const RadiationField& field, double tau, int n) {
  return characteristic_fan(field, tau, -field.support() - 2.0, n);
}

double invert_s(const CharacteristicFan& fan, const RadiationField& field, double q) {
  if (!fan.monotone) throw FoldError("invert_s: fan is folded (tau >= tau0)");
  const double M = field.support();
  if (q > fan.q.back() || q < fan.q.front()) throw InputError("invert_s: q outside the fan range");
  if (q == fan.q.back()) return fan.s.back();

  const auto it = std::upper_bound(fan.q.begin(), fan.q.end(), q);
  std::size_t i = static_cast<std::size_t>(it - fan.q.begin());
  i = i == 0 ? 0 : i - 1;
  i = std::min(i, fan.q.size() - 2);
  double lo = fan.s[i];
  double hi = fan.s[i + 1];
  // linear guess, then safeguarded Newton on q(s) - q
  double s = lo + (hi - lo) * (q - fan.q[i]) / (fan.q[i + 1] - fan.q[i]);
  const double q_tol = 1e-14 * M;
  for (int it_n = 0; it_n < 60; ++it_n) {
    const double f = q_in_cell(fan, field, i, s) - q;
    if (std::abs(f) <= q_tol) return s;
    if (f > 0.0) {
      hi = s;
    } else {
      lo = s;
    }
    const double slope = dq_ds(field, fan.tau, s);
    double next = s - f / slope;
    if (!(slope > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == s) return s;
    s = next;
  }
  if (std::abs(q_in_cell(fan, field, i, s) - q) > 1e-12 * M) {
    throw NumericalError("invert_s: Newton iteration did not converge");
  }
  return s;
}

double fold_time(const RadiationField& field, double s, double tau_cap) {
  if (!(tau_cap > 0.0)) return kInf;
  if (dq_ds(field, tau_cap, s) > 0.0) return kInf;
  return numerics::bisect_root([&](double t) { return dq_ds(field, t, s); }, 0.0, tau_cap);
}

FoldScan min_fold_time(const RadiationField& field, int grid_n, double refine_tol) {
  if (field.is_trivial()) throw InputError("min_fold_time: trivial data");
  const double M = field.support();

  // Coarse pass with an expanding bracket gives the first finite estimate.
  double scale = 0.0;
  for (int i = 1; i < 1001; ++i) {
    const auto sl = field.slopes(-M + 2.0 * M * i / 1001);
    scale = std::max(scale, std::abs(sl.dF) + std::abs(sl.d2F));
  }
  double estimate = kInf;
  for (int i = 1; i < 1001; ++i) {
    const double s = -M + 2.0 * M * i / 1001;
    for (double cap = 1.0 / scale; cap < 1e12 / scale; cap *= 2.0) {
      if (dq_ds(field, cap, s) <= 0.0) {
        estimate = std::min(estimate, fold_time(field, s, cap));
        break;
      }
    }
  }
  if (!std::isfinite(estimate)) throw NumericalError("min_fold_time: no fold found");
  const double cap = 10.0 * estimate;

  const double h = 2.0 * M / (grid_n + 1);
  double best = kInf;
  double best_s = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    const double s = -M + h * (i + 1);
    const double t = fold_time(field, s, cap);
    if (t < best) {
      best = t;
      best_s = s;
    }
  }
  const auto [s_ref, t_ref] = numerics::golden_section_min(
      [&](double s) { return fold_time(field, s, cap); }, best_s - h, best_s + h, refine_tol);
  if (t_ref < best) return {t_ref, s_ref};
  return {best, best_s};
}

ProfileEvaluator::ProfileEvaluator(RadiationField field, double tau, int n)
    : field_(std::move(field)), fan_(characteristic_fan(field_, tau, -field_.support(), n)) {
  if (!fan_.monotone) throw FoldError("profile: fan folded at tau = " + std::to_string(tau));
}

ProfilePoint ProfileEvaluator::at(double q) const {
  const double M = field_.support();
  ProfilePoint p;
  if (q >= M) {
    p.s = q;
    return p;
  }
  if (q <= fan_.q.front()) {
    // left of the data support every characteristic carries F' = F'' = 0
    p.s = fan_.s.front() + (q - fan_.q.front());
    p.V = fan_.V.front();
    p.Vtau = fan_.dVdtau_s.front();
    return p;
  }
  const double s = invert_s(fan_, field_, q);
  const auto it = std::upper_bound(fan_.s.begin(), fan_.s.end(), s);
  std::size_t i = static_cast<std::size_t>(it - fan_.s.begin());
  i = std::min(i == 0 ? 0 : i - 1, fan_.s.size() - 2);
  const auto c = cell_integral(field_, fan_.tau, fan_.s[i], s);
  const auto [d1, d2] = field_.slopes(s);
  const double dsq = dq_ds_from(fan_.tau, d1, d2);
  p.s = s;
  p.V = (fan_.V[i] - fan_.w[i]) + c.dV + d1;
  p.Vq = d1;
  p.Vqq = d2 / dsq;
  const double D = fan_.dVdtau_s[i] + c.dD;
  // dV/dtau along s = V_tau + V_q * dq/dtau, and dq/dtau = (V - V_q)/2
  p.Vtau = D - 0.5 * d1 * (p.V - d1);
  p.Vqtau = -0.5 * (p.V - d1) * p.Vqq;
  return p;
}

double pde_residual(const RadiationField& field, double tau, std::span<const double> q_grid,
                    double h) {
  if (!(h > 0.0) || tau - h < 0.0) throw InputError("pde_residual: need 0 < h <= tau");
  if (field.is_trivial()) return 0.0;
  const ProfileEvaluator minus(field, tau - h);
  const ProfileEvaluator mid(field, tau);
  const ProfileEvaluator plus(field, tau + h);
  double worst = 0.0;
  for (double q : q_grid) {
    if (q >= field.support()) continue;
    const auto p = mid.at(q);
    const double dtau_w = (plus.at(q).Vq - minus.at(q).Vq) / (2.0 * h);
    worst = std::max(worst, std::abs(2.0 * dtau_w + (p.V - p.Vq) * p.Vqq));
  }
  return worst;
}

}  // namespace qwblow
