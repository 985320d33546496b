#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qwblow/radiation_field.hpp"

namespace qwblow {

enum class Branch { A, B, A_limit };

std::string to_string(Branch b);

/// Result of minimising the lifespan functional over the data support.
struct LifespanEstimate {
  double tau0 = 0.0;
  double s_star = 0.0;
  Branch branch = Branch::A;
  std::vector<std::pair<double, double>> admissible_intervals;
  int grid_n = 0;
};

/// ln(1+z)/z, continuous through z = 0. Requires z > -1.
double g_log_ratio(double z);

/// (2/F'') g(-F'/F'') where F'' > 0 and F'' - F' > 0, nullopt elsewhere.
std::optional<double> tau_unified(const RadiationField& field, double s);

/// The two-logarithm form (2/F') ln(F''/(F''-F')), defined only where F' != 0.
/// Kept as a second route for cross-checking tau_unified.
std::optional<double> tau_direct(const RadiationField& field, double s);

/// Dense scan over (-M, M) followed by golden-section refinement of the best cell.
/// Throws InputError for trivial data and NumericalError if nothing is admissible.
LifespanEstimate tau0(const RadiationField& field, int grid_n = 20001, double refine_tol = 1e-12);

}  // namespace qwblow
