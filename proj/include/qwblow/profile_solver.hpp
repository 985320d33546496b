#pragma once

#include <span>
#include <vector>

#include "qwblow/radiation_field.hpp"

namespace qwblow {

/// Explicit characteristic solution of the slow-time profile equation
///   2 V_{q tau} + (V - V_q) V_qq = 0,  V(q, 0) = F(q),  V = 0 for q >= M,
/// sampled at a fixed slow time tau over parameters s in [s_min, M].
struct CharacteristicFan {
  double tau = 0.0;
  std::vector<double> s;     // characteristic labels, strictly increasing, s.back() == M
  std::vector<double> q;     // q(tau, s), the retarded coordinate r - t
  std::vector<double> V;     // V(q(tau, s), tau)
  std::vector<double> w;     // dV/dq, equal to F'(s)
  std::vector<double> d2V;   // d^2V/dq^2 = F''(s) / dsq (infinite where dsq <= 0)
  std::vector<double> dsq;   // dq/ds
  std::vector<double> dVdtau_s;  // d/dtau of V along the characteristic (s fixed)
  bool monotone = true;      // dsq > 0 at every node
};

/// dq/ds at slow time tau. Evaluated as exp(x) - (tau F''/2) expm1(x)/x with x = tau F'/2,
/// which equals the two-term characteristic formula and its F' -> 0 limit 1 - tau F''/2.
double dq_ds(const RadiationField& field, double tau, double s);

CharacteristicFan characteristic_fan(const RadiationField& field, double tau, double s_min,
                                     int n);

/// Default fan domain: the data support plus two units to its left.
CharacteristicFan characteristic_fan(const RadiationField& field, double tau, int n = 4001);

/// The label s with q(tau, s) = q. Throws FoldError on a folded fan and InputError when q
/// lies outside the fan's range.
double invert_s(const CharacteristicFan& fan, const RadiationField& field, double q);

/// Smallest tau in (0, tau_cap] with dq_ds(tau, s) = 0, +infinity if there is none.
double fold_time(const RadiationField& field, double s, double tau_cap);

/// First fold time of the whole fan, by grid scan plus golden-section refinement.
struct FoldScan {
  double tau_min = 0.0;
  double s_min = 0.0;
};
FoldScan min_fold_time(const RadiationField& field, int grid_n = 10001, double refine_tol = 1e-12);

/// Profile value and derivatives at a point (q, tau).
struct ProfilePoint {
  double s = 0.0;
  double V = 0.0;
  double Vq = 0.0;
  double Vqq = 0.0;
  double Vtau = 0.0;   // at fixed q
  double Vqtau = 0.0;
};

/// Evaluates V(., tau) anywhere on the real line: zero for q >= M, the constant tail left
/// of the data support, and fan inversion in between.
class ProfileEvaluator {
 public:
  ProfileEvaluator(RadiationField field, double tau, int n = 4001);

  [[nodiscard]] ProfilePoint at(double q) const;
  [[nodiscard]] double tau() const { return fan_.tau; }
  [[nodiscard]] const CharacteristicFan& fan() const { return fan_; }
  [[nodiscard]] const RadiationField& field() const { return field_; }

 private:
  RadiationField field_;
  CharacteristicFan fan_;
};

/// max over q_grid of |2 d_tau(V_q) + (V - V_q) V_qq| with d_tau a centered difference of
/// step h at fixed q.
double pde_residual(const RadiationField& field, double tau, std::span<const double> q_grid,
                    double h);

}  // namespace qwblow
