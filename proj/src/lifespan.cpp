#include "qwblow/lifespan.hpp"

#include <cmath>
#include <limits>

#include "qwblow/errors.hpp"
#include "qwblow/numerics.hpp"

namespace qwblow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tau_or_inf(const RadiationField& field, double s) {
  return tau_unified(field, s).value_or(kInf);
}

}  // namespace

std::string to_string(Branch b) {
  switch (b) {
    case Branch::A:
      return "A";
    case Branch::B:
      return "B";
    case Branch::A_limit:
      return "A_limit";
  }
  return "?";
}

double g_log_ratio(double z) {
  if (!(z > -1.0)) throw InputError("g_log_ratio: z must exceed -1");
  if (std::abs(z) < 1e-4) return 1.0 - z / 2.0 + z * z / 3.0 - z * z * z / 4.0;
  return std::log1p(z) / z;
}

std::optional<double> tau_unified(const RadiationField& field, double s) {
  const auto [d1, d2] = field.slopes(s);
  if (!(d2 > 0.0) || !(d2 - d1 > 0.0)) return std::nullopt;
  const double z = -d1 / d2;
  if (!(z > -1.0)) return std::nullopt;
  return 2.0 / d2 * g_log_ratio(z);
}

std::optional<double> tau_direct(const RadiationField& field, double s) {
  const auto [d1, d2] = field.slopes(s);
  if (d1 == 0.0 || d2 == d1) return std::nullopt;
  const double ratio = d2 / (d2 - d1);
  if (!(ratio > 0.0)) return std::nullopt;
  const double t = 2.0 / d1 * std::log(ratio);
  if (!(t > 0.0)) return std::nullopt;
  return t;
}

LifespanEstimate tau0(const RadiationField& field, int grid_n, double refine_tol) {
  if (grid_n < 1001) throw InputError("tau0: grid_n must be at least 1001");
  if (!(refine_tol > 0.0)) throw InputError("tau0: refinement tolerance must be positive");
  if (field.is_trivial()) throw InputError("tau0: trivial data (F0 identically zero)");

  const double M = field.support();
  const double h = 2.0 * M / (grid_n + 1);
  auto node = [&](int i) { return -M + h * (i + 1); };

  LifespanEstimate est;
  est.grid_n = grid_n;
  std::vector<double> vals(static_cast<std::size_t>(grid_n));
  double best = kInf;
  int best_i = -1;
  double max_abs_dF = 0.0;
  bool in_run = false;
  double run_lo = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    const double s = node(i);
    max_abs_dF = std::max(max_abs_dF, std::abs(field.dF(s)));
    const double v = tau_or_inf(field, s);
    vals[static_cast<std::size_t>(i)] = v;
    if (std::isfinite(v)) {
      if (!in_run) {
        in_run = true;
        run_lo = s;
      }
      // ties go to the smaller s
      if (v < best) {
        best = v;
        best_i = i;
      }
    } else if (in_run) {
      in_run = false;
      est.admissible_intervals.emplace_back(run_lo, node(i - 1));
    }
  }
  if (in_run) est.admissible_intervals.emplace_back(run_lo, node(grid_n - 1));
  if (best_i < 0) throw NumericalError("tau0: no admissible point at this grid resolution");

  const auto at = [&](int i) {
    return (i < 0 || i >= grid_n) ? kInf : vals[static_cast<std::size_t>(i)];
  };
  const bool edge = !std::isfinite(at(best_i - 1)) || !std::isfinite(at(best_i + 1));

  const double lo = node(best_i) - h;
  const double hi = node(best_i) + h;
  auto [s_star, t_star] =
      numerics::golden_section_min([&](double s) { return tau_or_inf(field, s); }, lo, hi, refine_tol);
  if (!(t_star <= best)) {
    s_star = node(best_i);
    t_star = best;
  }
  est.tau0 = t_star;
  est.s_star = s_star;
  if (std::abs(field.dF(s_star)) < 1e-8 * max_abs_dF) {
    est.branch = Branch::B;
  } else {
    est.branch = edge ? Branch::A_limit : Branch::A;
  }
  return est;
}

}  // namespace qwblow
