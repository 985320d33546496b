#pragma once

#include <memory>
#include <vector>

#include "qwblow/profile_solver.hpp"
#include "qwblow/radiation_field.hpp"

namespace qwblow {

/// Exact radial solution of the free wave equation, through R = r w0 which solves the 1-D
/// wave equation with odd extension:
///   R(t, r) = 1/2 [G(r+t) + G(r-t)] + 1/2 int_{r-t}^{r+t} sigma u1(sigma) dsigma,  G = s u0.
struct LinearWave {
  double w0 = 0.0;
  double dt_w0 = 0.0;
  double dr_w0 = 0.0;
  // R = r w0 and its derivatives (R_tt == R_rr).
  double R = 0.0;
  double Rt = 0.0;
  double Rr = 0.0;
  double Rtt = 0.0;
  double Rtr = 0.0;
};

LinearWave linear_wave(const InitialData& data, double t, double r, double quad_tol = 1e-12);

/// Smooth cutoff: 1 for x <= 1, 0 for x >= 2, exponential glue in between.
Jet cutoff_chi(double x);

/// U = r u and u with first and second derivatives in (t, r).
struct FieldValue {
  double U = 0.0, Ut = 0.0, Ur = 0.0, Utt = 0.0, Urr = 0.0, Utr = 0.0;
  double u = 0.0, ut = 0.0, ur = 0.0, utt = 0.0, urr = 0.0, utr = 0.0;
};

/// The glued approximate solution
///   u_a = eps chi(eps t) w0 + (eps/r)(1 - chi(eps t)) chi(-3 eps q) V(q, tau),
/// with q = r - t and tau = eps ln(1+t).
class ApproxSolution {
 public:
  ApproxSolution(RadiationField field, double epsilon, double tau0);

  /// All profile data needed at one time level; evaluation in r is then cheap.
  class Slice {
   public:
    [[nodiscard]] FieldValue eval(double r) const;
    /// d_t^2 u - (1 + u + d_t u) Lap u at (t, r).
    [[nodiscard]] double residual(double r) const;
    [[nodiscard]] double t() const { return t_; }

   private:
    friend class ApproxSolution;
    const ApproxSolution* owner_ = nullptr;
    double t_ = 0.0;
    double tau_ = 0.0;
    double chi_t_ = 1.0, dchi_t_ = 0.0, d2chi_t_ = 0.0;
    std::shared_ptr<const ProfileEvaluator> mid_, minus_, plus_;
  };

  [[nodiscard]] Slice slice(double t) const;
  [[nodiscard]] FieldValue eval(double t, double r) const { return slice(t).eval(r); }

  [[nodiscard]] double epsilon() const { return epsilon_; }
  [[nodiscard]] double tau0() const { return tau0_; }
  [[nodiscard]] const RadiationField& field() const { return field_; }

  /// Step used for the centered difference of V_tau in tau.
  static constexpr double kTauStep = 1e-3;

 private:
  RadiationField field_;
  double epsilon_;
  double tau0_;
};

FieldValue u_approx(const ApproxSolution& apx, double t, double r);

double residual_ja(const ApproxSolution& apx, double t, double r);

/// sup over r of |J_a(t, r)| sampled on a q-grid covering the profile and the cutoff band.
double sup_ja(const ApproxSolution& apx, double t);

struct JaProbe {
  std::vector<double> times;
  std::vector<double> sup_ja;
  double slope = 0.0;  // least squares of log sup|J_a| against log(1+t)
};

JaProbe ja_scaling_probe(const ApproxSolution& apx, const std::vector<double>& times);

}  // namespace qwblow
