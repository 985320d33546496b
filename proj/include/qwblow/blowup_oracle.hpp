#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qwblow/radiation_field.hpp"
#include "qwblow/wave_solver.hpp"

namespace qwblow {

using Coefficient = std::function<double(double)>;

/// Piecewise-linear interpolant through samples; constant beyond the end points.
class PiecewiseLinear {
 public:
  PiecewiseLinear(std::vector<double> t, std::vector<double> v);
  double operator()(double x) const;
  [[nodiscard]] const std::vector<double>& knots() const { return t_; }
  [[nodiscard]] const std::vector<double>& values() const { return v_; }

 private:
  std::vector<double> t_, v_;
};

/// w' = a0(t) w^2 + a1(t) w + a2(t) on [0, T], w(0) = w0.
struct RiccatiInstance {
  double T = 1.0;
  Coefficient a0, a1, a2;
  double w0 = 0.0;
  /// Non-empty for sampled coefficients: the integrals are then taken exactly over the
  /// piecewise-linear interpolant between these knots.
  std::vector<double> knots;
};

struct BoundReport {
  double K = 0.0;     // (int |a2|) exp(int |a1|)
  double lhs = 0.0;   // (int a0) exp(-int |a1|)
  double rhs = 0.0;   // 1 / (w0 - K), +inf when not applicable
  bool applicable = false;  // w0 > K
  bool certified = false;   // applicable and lhs >= rhs: no solution on all of [0, T]
};

/// Comparison-lemma test. Throws InputError when a0 is negative somewhere.
BoundReport riccati_bound(const RiccatiInstance& inst, double quad_tol = 1e-11);

struct IntegrationResult {
  bool blew_up = false;
  double t_blow = 0.0;  // first time |w| > 1e12
  double t_lo = 0.0, t_hi = 0.0;  // bracket of the singularity
  double w_end = 0.0;   // w(T) when the solution survives
  long steps = 0;
};

/// Dormand-Prince 5(4) with step rejection; blowup is declared once |w| exceeds 1e12.
IntegrationResult riccati_integrate(const RiccatiInstance& inst, double rtol = 1e-10,
                                    double atol = 1e-12);

/// Riccati certificate built along the tracked characteristic through rho0.
struct Certificate {
  double t_eps = 0.0;
  double w_hat = 0.0;          // -w1 at t_eps
  double seed_measured = 0.0;  // w_hat / (2 eps)
  double seed_predicted = 0.0; // F''(rho0) / dq_ds(mu tau0, rho0)
  double seed_rel_err = 0.0;
  double K = 0.0;
  bool certified = false;
  bool extrapolated = false;   // bound reached only past the end of the path data
  double bound_T = 0.0;        // certified upper bound on the lifespan
  double eps_ln_bound = 0.0;
  std::string note;
  // coefficient samples along the path from t_eps on
  std::vector<double> t, a0, a1, a2;
};

struct CertifyOptions {
  double epsilon = 0.0;
  double tau0 = 0.0;
  double rho0 = 0.0;
  double mu = 0.5;
};

/// Extracts w-hat, a0, a1, a2 along the path samples and applies the comparison lemma from
/// t_eps = exp(mu tau0 / eps) - 1 onwards. Past the last sample the path is continued as a
/// free outgoing ray (c = 1, a1 = a2 = 0). Throws NumericalError when the path ends before
/// t_eps.
Certificate certify_from_run(std::span<const PathSample> path, const RadiationField& field,
                             const CertifyOptions& opts);

}  // namespace qwblow
