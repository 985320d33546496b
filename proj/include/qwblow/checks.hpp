#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qwblow/approx_solution.hpp"
#include "qwblow/radiation_field.hpp"

namespace qwblow {

/// The bump a (1 - s^2)^4 on [-1, 1] with u1 = 0, the reference datum of the test corpus.
InitialData reference_data(double amplitude = 1.0);

/// tau0 of the minimisation against the first fold of the characteristic fan.
/// `tau0_factor` multiplies the minimised value and exists to exercise the harness.
struct FoldEquivalence {
  double tau0 = 0.0;
  double fold_min = 0.0;
  double rel_err = 0.0;
  bool pass = false;  // rel_err <= 1e-6
};
FoldEquivalence fold_equivalence(const RadiationField& field, double tau0_factor = 1.0);

/// Profile PDE residual at slow time tau under stencil halving h -> h/2.
struct ResidualOrder {
  double tau = 0.0;
  double h = 0.0;
  double residual_h = 0.0;
  double residual_h2 = 0.0;
  double order = 0.0;
  bool pass = false;  // order >= 1.8
};
ResidualOrder profile_residual_order(const RadiationField& field, double tau, double h = 1e-3);

/// First-order upwind integration of 2 w_tau + (V - w) w_q = 0, V = -int_q^M w, on a uniform
/// q-grid over [-M - 2, M]. Independent of the characteristic construction.
struct UpwindProfile {
  std::vector<double> q, w, V;
  double tau = 0.0;
  long steps = 0;
};
UpwindProfile upwind_profile(const RadiationField& field, double tau, int nodes,
                             double cfl = 0.5);

/// Max |V_fan - V_upwind| on the upwind nodes for `nodes` and 2 `nodes` - 1 grid points.
struct UpwindComparison {
  double tau = 0.0;
  double err_coarse = 0.0;
  double err_fine = 0.0;
  double order = 0.0;
  bool pass = false;  // first-order agreement: order >= 0.8 and err_fine < 1e-2 max|V|
};
UpwindComparison fan_vs_upwind(const RadiationField& field, double tau, int nodes = 1001);

/// Frozen-coefficient (c = 1) solver runs against the exact radial solution.
struct ConvergenceStudy {
  std::vector<double> dr;
  std::vector<double> err;  // L-infinity error of U at t_end
  double order = 0.0;       // from the two finest runs
  bool pass = false;        // order >= 1.9
};
ConvergenceStudy linear_convergence(const InitialData& data, double h = 2.5e-3,
                                    double t_end = 2.0);

/// max over q in [-M, M] of |r w0(t, t + q) - F(q)| at each t, plus the same with r replaced
/// by 1 + t.
struct RadiationLimit {
  std::vector<double> times;
  std::vector<double> err;
  std::vector<double> err_weighted;
  double slope = 0.0;
  double slope_weighted = 0.0;
  bool pass = false;  // |slope + 1| <= 0.1
};
RadiationLimit radiation_limit_probe(const InitialData& data,
                                     const std::vector<double>& times = {25, 50, 100, 200});

/// sup_r |J_a| at geometrically spaced times in [2/eps, exp(b_frac tau0 / eps) - 1].
struct JaWindow {
  double epsilon = 0.0;
  JaProbe probe;
  double sup = 0.0;  // largest value over the window
};
JaWindow ja_window(const RadiationField& field, double epsilon, double tau0,
                   double b_frac = 0.8, int n_times = 6);

/// sup|J_a| at epsilon and epsilon/2 over the times both windows share,
/// [4/epsilon, exp(b_frac tau0 / epsilon) - 1], so that the ratio isolates the epsilon scaling.
struct JaHalving {
  double epsilon = 0.0;
  std::vector<double> times;
  std::vector<double> sup_eps, sup_half;
  double factor = 0.0;             // max sup_eps / max sup_half
  double factor_own_windows = 0.0; // same ratio with each epsilon over its own window
  bool pass = false;               // factor in [3, 9]
};
JaHalving ja_halving(const RadiationField& field, double epsilon, double tau0,
                     double b_frac = 0.8, int n_times = 6);

/// Random Riccati instances with polynomial coefficients and a0 >= 0. Every certified
/// instance must blow up under direct integration no later than T.
struct RiccatiBatch {
  int instances = 0;
  int certified = 0;
  int counterexamples = 0;
  double worst_ratio = 0.0;  // max t_blow / T over certified instances
  bool pass = false;
};
RiccatiBatch riccati_property_batch(int n, std::uint64_t seed);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct SelftestOptions {
  double tau0_factor = 1.0;  // fault hook for the fold-equivalence suite
  int riccati_instances = 500;
  std::uint64_t seed = 20240613;
};

std::vector<CheckResult> run_selftest(const SelftestOptions& opts = {});

}  // namespace qwblow
