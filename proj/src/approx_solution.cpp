#include "qwblow/approx_solution.hpp"

#include <algorithm>
#include <cmath>

#include "qwblow/errors.hpp"
#include "qwblow/numerics.hpp"

namespace qwblow {

namespace {

struct Phi {
  double v, d1, d2;
};

// exp(-1/y) and its first two derivatives, zero for y <= 0
Phi glue_phi(double y) {
  if (y <= 0.0) return {0.0, 0.0, 0.0};
  const double v = std::exp(-1.0 / y);
  const double y2 = y * y;
  return {v, v / y2, v * (1.0 / (y2 * y2) - 2.0 / (y2 * y))};
}

}  // namespace

LinearWave linear_wave(const InitialData& data, double t, double r, double quad_tol) {
  if (!(t >= 0.0) || !(r >= 0.0)) throw InputError("linear_wave: need t >= 0 and r >= 0");
  const auto& u0 = data.u0;
  const auto& u1 = data.u1;
  auto G1 = [&](double s) {
    const Jet j = u0.jet(s);
    return j.value + s * j.d1;
  };
  auto G2 = [&](double s) {
    const Jet j = u0.jet(s);
    return 2.0 * j.d1 + s * j.d2;
  };
  auto H = [&](double s) { return s * u1(s); };
  auto H1 = [&](double s) {
    const Jet j = u1.jet(s);
    return j.value + s * j.d1;
  };

  LinearWave lw;
  if (r < 1e-10) {
    lw.w0 = G1(t) + H(t);
    lw.dt_w0 = G2(t) + H1(t);
    lw.dr_w0 = 0.0;
    lw.Rr = lw.w0;
    lw.Rtr = lw.dt_w0;
    return lw;
  }
  const double p = r + t;
  const double m = r - t;
  double integral = 0.0;
  if (!u1.is_zero()) {
    const double M = data.support();
    const double lo = std::max(m, -M);
    const double hi = std::min(p, M);
    if (hi > lo) integral = numerics::adaptive_simpson(H, lo, hi, quad_tol);
  }
  lw.R = 0.5 * (p * u0(p) + m * u0(m)) + 0.5 * integral;
  lw.Rt = 0.5 * (G1(p) - G1(m)) + 0.5 * (H(p) + H(m));
  lw.Rr = 0.5 * (G1(p) + G1(m)) + 0.5 * (H(p) - H(m));
  lw.Rtt = 0.5 * (G2(p) + G2(m)) + 0.5 * (H1(p) - H1(m));
  lw.Rtr = 0.5 * (G2(p) - G2(m)) + 0.5 * (H1(p) + H1(m));
  lw.w0 = lw.R / r;
  lw.dt_w0 = lw.Rt / r;
  lw.dr_w0 = (lw.Rr - lw.w0) / r;
  return lw;
}

Jet cutoff_chi(double x) {
  if (x <= 1.0) return {1.0, 0.0, 0.0};
  if (x >= 2.0) return {0.0, 0.0, 0.0};
  const Phi pa = glue_phi(2.0 - x);
  const Phi pb = glue_phi(x - 1.0);
  const double a = pa.v, b = pb.v;
  const double da = -pa.d1, db = pb.d1;
  const double d2a = pa.d2, d2b = pb.d2;
  const double S = a + b;
  const double dS = da + db;
  const double N = da * b - a * db;
  const double dN = d2a * b - a * d2b;
  return {a / S, N / (S * S), (dN * S - 2.0 * N * dS) / (S * S * S)};
}

ApproxSolution::ApproxSolution(RadiationField field, double epsilon, double tau0)
    : field_(std::move(field)), epsilon_(epsilon), tau0_(tau0) {
  if (!(epsilon >= 0.0)) throw InputError("approx_solution: epsilon must be non-negative");
  if (!(tau0 > 0.0)) throw InputError("approx_solution: tau0 must be positive");
}

ApproxSolution::Slice ApproxSolution::slice(double t) const {
  if (!(t >= 0.0)) throw InputError("approx_solution: t must be non-negative");
  Slice sl;
  sl.owner_ = this;
  sl.t_ = t;
  sl.tau_ = epsilon_ * std::log1p(t);
  const Jet c = cutoff_chi(epsilon_ * t);
  sl.chi_t_ = c.value;
  sl.dchi_t_ = epsilon_ * c.d1;
  sl.d2chi_t_ = epsilon_ * epsilon_ * c.d2;
  if (sl.chi_t_ < 1.0 && !field_.is_trivial()) {
    if (sl.tau_ + kTauStep >= tau0_) {
      throw FoldError("approx_solution: slow time reaches tau0, profile does not exist");
    }
    sl.mid_ = std::make_shared<const ProfileEvaluator>(field_, sl.tau_);
    sl.plus_ = std::make_shared<const ProfileEvaluator>(field_, sl.tau_ + kTauStep);
    sl.minus_ =
        std::make_shared<const ProfileEvaluator>(field_, std::max(0.0, sl.tau_ - kTauStep));
  }
  return sl;
}

FieldValue ApproxSolution::Slice::eval(double r) const {
  if (!(r > 0.0)) throw InputError("approx_solution: r must be positive");
  const double eps = owner_->epsilon_;
  const double X = chi_t_, dX = dchi_t_, d2X = d2chi_t_;

  double R = 0, Rt = 0, Rr = 0, Rtt = 0, Rtr = 0;
  if (X > 0.0 || dX != 0.0) {
    const auto lw = linear_wave(owner_->field_.data(), t_, r, owner_->field_.quad_tol());
    R = lw.R;
    Rt = lw.Rt;
    Rr = lw.Rr;
    Rtt = lw.Rtt;
    Rtr = lw.Rtr;
  }
  const double Rrr = Rtt;

  double P = 0, Pt = 0, Pr = 0, Ptt = 0, Prr = 0, Ptr = 0;
  if (X < 1.0 && mid_) {
    const double q = r - t_;
    const Jet c = cutoff_chi(-3.0 * eps * q);
    const double F0 = c.value;
    const double F1 = -3.0 * eps * c.d1;
    const double F2 = 9.0 * eps * eps * c.d2;
    if (F0 != 0.0 || F1 != 0.0 || F2 != 0.0) {
      const ProfilePoint p = mid_->at(q);
      const double h = plus_->tau() - minus_->tau();
      const double Vtt = (plus_->at(q).Vtau - minus_->at(q).Vtau) / h;
      const double tt = eps / (1.0 + t_);
      const double ttt = -eps / ((1.0 + t_) * (1.0 + t_));
      const double Vdot = -p.Vq + p.Vtau * tt;  // d/dt of V at fixed r
      P = F0 * p.V;
      Pr = F1 * p.V + F0 * p.Vq;
      Prr = F2 * p.V + 2.0 * F1 * p.Vq + F0 * p.Vqq;
      Pt = -F1 * p.V + F0 * Vdot;
      Ptt = F2 * p.V - 2.0 * F1 * Vdot +
            F0 * (p.Vqq - 2.0 * p.Vqtau * tt + Vtt * tt * tt + p.Vtau * ttt);
      Ptr = -F2 * p.V + F1 * Vdot - F1 * p.Vq + F0 * (-p.Vqq + p.Vqtau * tt);
    }
  }

  FieldValue f;
  f.U = eps * (X * R + (1.0 - X) * P);
  f.Ut = eps * (dX * (R - P) + X * Rt + (1.0 - X) * Pt);
  f.Utt = eps * (d2X * (R - P) + 2.0 * dX * (Rt - Pt) + X * Rtt + (1.0 - X) * Ptt);
  f.Ur = eps * (X * Rr + (1.0 - X) * Pr);
  f.Urr = eps * (X * Rrr + (1.0 - X) * Prr);
  f.Utr = eps * (dX * (Rr - Pr) + X * Rtr + (1.0 - X) * Ptr);
  f.u = f.U / r;
  f.ut = f.Ut / r;
  f.ur = (f.Ur - f.u) / r;
  f.utt = f.Utt / r;
  f.urr = (f.Urr - 2.0 * f.ur) / r;
  f.utr = (f.Utr - f.ut) / r;
  return f;
}

double ApproxSolution::Slice::residual(double r) const {
  const FieldValue f = eval(r);
  // Lap u = U_rr / r for radial u = U / r
  return (f.Utt - (1.0 + f.u + f.ut) * f.Urr) / r;
}

FieldValue u_approx(const ApproxSolution& apx, double t, double r) { return apx.eval(t, r); }

double residual_ja(const ApproxSolution& apx, double t, double r) {
  return apx.slice(t).residual(r);
}

double sup_ja(const ApproxSolution& apx, double t) {
  const auto sl = apx.slice(t);
  const double M = apx.field().support();
  const double eps = apx.epsilon();
  double q_lo = -t + 1e-3;
  if (eps > 0.0 && eps * t > 1.0) q_lo = std::max(q_lo, -2.0 / (3.0 * eps) - 0.5);
  double worst = 0.0;
  auto probe = [&](double lo, double hi, int n) {
    for (int i = 0; i <= n; ++i) {
      const double q = lo + (hi - lo) * i / n;
      const double r = t + q;
      if (r <= 0.0) continue;
      worst = std::max(worst, std::abs(sl.residual(r)));
    }
  };
  probe(q_lo, M, 3000);
  probe(std::max(q_lo, -M - 1.0), M, 2000);
  return worst;
}

JaProbe ja_scaling_probe(const ApproxSolution& apx, const std::vector<double>& times) {
  JaProbe probe;
  std::vector<double> lx, ly;
  for (double t : times) {
    const double s = sup_ja(apx, t);
    probe.times.push_back(t);
    probe.sup_ja.push_back(s);
    lx.push_back(std::log1p(t));
    ly.push_back(std::log(s));
  }
  if (times.size() >= 2) probe.slope = numerics::fit_slope(lx, ly);
  return probe;
}

}  // namespace qwblow
