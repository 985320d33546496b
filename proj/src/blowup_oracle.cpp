#include "qwblow/blowup_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qwblow/errors.hpp"
#include "qwblow/numerics.hpp"
#include "qwblow/profile_solver.hpp"

namespace qwblow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBlowup = 1e12;

// Exact integral of |y| for y linear between (x0, y0) and (x1, y1).
double abs_linear(double x0, double x1, double y0, double y1) {
  const double h = x1 - x0;
  if ((y0 >= 0.0) == (y1 >= 0.0)) return 0.5 * h * std::abs(y0 + y1);
  const double x = h * y0 / (y0 - y1);
  return 0.5 * (x * std::abs(y0) + (h - x) * std::abs(y1));
}

struct Integrals {
  double a0 = 0.0, abs_a1 = 0.0, abs_a2 = 0.0;
};

Integrals integrate_coefficients(const RiccatiInstance& inst, double tol) {
  Integrals out;
  if (!inst.knots.empty()) {
    std::vector<double> x;
    x.push_back(0.0);
    for (double k : inst.knots) {
      if (k > 0.0 && k < inst.T) x.push_back(k);
    }
    x.push_back(inst.T);
    std::sort(x.begin(), x.end());
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double p = x[i], q = x[i + 1];
      const double b0 = inst.a0(p), b1 = inst.a0(q);
      if (b0 < 0.0 || b1 < 0.0) throw InputError("riccati: a0 must be non-negative");
      out.a0 += 0.5 * (q - p) * (b0 + b1);
      out.abs_a1 += abs_linear(p, q, inst.a1(p), inst.a1(q));
      out.abs_a2 += abs_linear(p, q, inst.a2(p), inst.a2(q));
    }
    return out;
  }
  constexpr int kProbe = 1000;
  for (int i = 0; i <= kProbe; ++i) {
    if (inst.a0(inst.T * i / kProbe) < 0.0) throw InputError("riccati: a0 must be non-negative");
  }
  out.a0 = numerics::adaptive_simpson(inst.a0, 0.0, inst.T, tol);
  out.abs_a1 = numerics::adaptive_simpson([&](double t) { return std::abs(inst.a1(t)); }, 0.0,
                                          inst.T, tol);
  out.abs_a2 = numerics::adaptive_simpson([&](double t) { return std::abs(inst.a2(t)); }, 0.0,
                                          inst.T, tol);
  return out;
}

void validate(const RiccatiInstance& inst) {
  if (!(inst.T > 0.0) || !std::isfinite(inst.T)) throw InputError("riccati: horizon must be positive");
  if (!inst.a0 || !inst.a1 || !inst.a2) throw InputError("riccati: all three coefficients are required");
  if (!std::isfinite(inst.w0)) throw InputError("riccati: w0 must be finite");
}

BoundReport bound_from(double w0, const Integrals& in) {
  BoundReport b;
  b.K = in.abs_a2 * std::exp(in.abs_a1);
  b.lhs = in.a0 * std::exp(-in.abs_a1);
  b.applicable = w0 > b.K;
  b.rhs = b.applicable ? 1.0 / (w0 - b.K) : kInf;
  b.certified = b.applicable && b.lhs >= b.rhs;
  return b;
}

}  // namespace

PiecewiseLinear::PiecewiseLinear(std::vector<double> t, std::vector<double> v)
    : t_(std::move(t)), v_(std::move(v)) {
  if (t_.empty() || t_.size() != v_.size()) throw InputError("interpolant: need matching samples");
  for (std::size_t i = 1; i < t_.size(); ++i) {
    if (!(t_[i] > t_[i - 1])) throw InputError("interpolant: abscissae must increase");
  }
}

double PiecewiseLinear::operator()(double x) const {
  if (x <= t_.front()) return v_.front();
  if (x >= t_.back()) return v_.back();
  const auto it = std::upper_bound(t_.begin(), t_.end(), x);
  const auto i = static_cast<std::size_t>(it - t_.begin()) - 1;
  const double w = (x - t_[i]) / (t_[i + 1] - t_[i]);
  return v_[i] + w * (v_[i + 1] - v_[i]);
}

BoundReport riccati_bound(const RiccatiInstance& inst, double quad_tol) {
  validate(inst);
  return bound_from(inst.w0, integrate_coefficients(inst, quad_tol));
}

IntegrationResult riccati_integrate(const RiccatiInstance& inst, double rtol, double atol) {
  validate(inst);
  // Dormand-Prince tableau
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  auto f = [&](double t, double w) { return (inst.a0(t) * w + inst.a1(t)) * w + inst.a2(t); };

  IntegrationResult res;
  const double T = inst.T;
  double t = 0.0;
  double w = inst.w0;
  double h = 1e-3 * T;
  double k1 = f(t, w);
  const double h_min = 1e-15 * T;
  while (t < T) {
    if (t + h > T) h = T - t;
    const double k2 = f(t + c2 * h, w + h * a21 * k1);
    const double k3 = f(t + c3 * h, w + h * (a31 * k1 + a32 * k2));
    const double k4 = f(t + c4 * h, w + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = f(t + c5 * h, w + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 = f(t + h, w + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double w_new = w + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = f(t + h, w_new);
    const double err = std::abs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
    const double scale = atol + rtol * std::max(std::abs(w), std::abs(w_new));
    const double ratio = std::isfinite(err) ? err / scale : kInf;
    if (ratio <= 1.0) {
      const double t_prev = t;
      t += h;
      w = w_new;
      k1 = k7;
      ++res.steps;
      if (std::abs(w) > kBlowup) {
        res.blew_up = true;
        res.t_blow = t;
        res.t_lo = t_prev;
        // past this point the quadratic term dominates: w ~ 1 / (a0 (t* - t))
        const double a0 = inst.a0(t);
        res.t_hi = a0 > 0.0 ? t + 2.0 / (a0 * std::abs(w)) : T;
        return res;
      }
      h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(ratio, 1e-300), -0.2)));
    } else {
      h *= std::max(0.1, 0.9 * std::pow(ratio, -0.2));
    }
    if (h < h_min) {
      if (std::abs(w) > 1e6) {
        // the step cannot resolve the approach to the singularity any further
        res.blew_up = true;
        res.t_blow = t;
        res.t_lo = t;
        res.t_hi = t + h_min;
        return res;
      }
      throw NumericalError("riccati_integrate: step size underflow");
    }
  }
  res.w_end = w;
  return res;
}

Certificate certify_from_run(std::span<const PathSample> path, const RadiationField& field,
                             const CertifyOptions& o) {
  if (!(o.epsilon > 0.0) || !(o.tau0 > 0.0)) throw InputError("certify: need eps > 0 and tau0 > 0");
  if (!(o.mu > 0.0 && o.mu < 1.0)) throw InputError("certify: mu must lie in (0, 1)");
  Certificate cert;
  cert.t_eps = std::exp(o.mu * o.tau0 / o.epsilon) - 1.0;
  cert.seed_predicted = field.d2F(o.rho0) / dq_ds(field, o.mu * o.tau0, o.rho0);
  if (path.size() < 2 || path.back().t < cert.t_eps) {
    throw NumericalError("certify: path data end before t_eps");
  }

  // samples from t_eps on, the first one interpolated to t_eps exactly
  std::size_t j = 0;
  while (path[j + 1].t < cert.t_eps) ++j;
  std::vector<PointFields> f;
  std::vector<double> ts;
  {
    const auto& p = path[j];
    const auto& q = path[j + 1];
    const double x = (cert.t_eps - p.t) / (q.t - p.t);
    auto mix = [x](double a, double b) { return a + x * (b - a); };
    PointFields g;
    g.r = mix(p.f.r, q.f.r);
    g.u = mix(p.f.u, q.f.u);
    g.dtu = mix(p.f.dtu, q.f.dtu);
    g.dru = mix(p.f.dru, q.f.dru);
    g.c = mix(p.f.c, q.f.c);
    g.w1 = mix(p.f.w1, q.f.w1);
    g.w2 = mix(p.f.w2, q.f.w2);
    g.L1u = mix(p.f.L1u, q.f.L1u);
    g.L2u = mix(p.f.L2u, q.f.L2u);
    ts.push_back(cert.t_eps);
    f.push_back(g);
  }
  for (std::size_t k = j + 1; k < path.size(); ++k) {
    if (path[k].t > ts.back()) {
      ts.push_back(path[k].t);
      f.push_back(path[k].f);
    }
  }

  cert.w_hat = -f.front().w1;
  cert.seed_measured = cert.w_hat / (2.0 * o.epsilon);
  cert.seed_rel_err = std::abs(cert.seed_measured - cert.seed_predicted) /
                      std::max(std::abs(cert.seed_predicted), 1e-300);

  // integrating factor I = int L2u / (4 c^2) from t_eps
  const std::size_t n = ts.size();
  std::vector<double> I(n, 0.0);
  auto g = [&](std::size_t k) { return f[k].L2u / (4.0 * f[k].c * f[k].c); };
  for (std::size_t k = 1; k < n; ++k) I[k] = I[k - 1] + 0.5 * (ts[k] - ts[k - 1]) * (g(k) + g(k - 1));
  cert.t = ts;
  cert.a0.resize(n);
  cert.a1.resize(n);
  cert.a2.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double r = f[k].r, c = f[k].c;
    const double inv = 1.0 / (4.0 * r * c);
    cert.a0[k] = std::exp(I[k]) * inv;
    cert.a1[k] = (f[k].w2 + f[k].dtu) * inv;
    cert.a2[k] = -f[k].w2 * inv * (f[k].dtu + r / c * f[k].L2u) * std::exp(-I[k]);
  }

  // cumulative integrals; the lemma is tested at every sample as a candidate horizon
  Integrals acc;
  for (std::size_t k = 1; k < n; ++k) {
    const double h = ts[k] - ts[k - 1];
    acc.a0 += 0.5 * h * (cert.a0[k] + cert.a0[k - 1]);
    acc.abs_a1 += abs_linear(ts[k - 1], ts[k], cert.a1[k - 1], cert.a1[k]);
    acc.abs_a2 += abs_linear(ts[k - 1], ts[k], cert.a2[k - 1], cert.a2[k]);
    const BoundReport b = bound_from(cert.w_hat, acc);
    cert.K = b.K;
    if (b.certified) {
      cert.certified = true;
      cert.bound_T = ts[k];
      cert.eps_ln_bound = o.epsilon * std::log(cert.bound_T);
      return cert;
    }
  }
  const BoundReport last = bound_from(cert.w_hat, acc);
  cert.K = last.K;
  if (!last.applicable) {
    cert.note = "w_hat(t_eps) does not exceed K; no certificate at this epsilon";
    return cert;
  }
  // free outgoing continuation: r = r_end + (t - t_end), c = 1, a1 = a2 = 0, so
  // int a0 grows like exp(I_end)/4 * ln(r / r_end)
  const double need = last.rhs * std::exp(acc.abs_a1) - acc.a0;
  const double r_end = f.back().r;
  const double growth = 4.0 * std::exp(-I.back()) * need;
  if (growth > 700.0) {
    cert.note = "bound beyond representable range";
    return cert;
  }
  cert.certified = true;
  cert.extrapolated = true;
  cert.bound_T = ts.back() + r_end * std::expm1(growth);
  cert.eps_ln_bound = o.epsilon * std::log(cert.bound_T);
  return cert;
}

}  // namespace qwblow
