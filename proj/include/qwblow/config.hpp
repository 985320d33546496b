#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qwblow/radiation_field.hpp"

namespace qwblow {

struct DataConfig {
  double M = 1.0;
  ProfileSpec u0{ProfileSpec::Kind::poly_bump, 4, 1.0, {}};
  ProfileSpec u1{ProfileSpec::Kind::zero, 4, 1.0, {}};
  bool normalize_tau0 = false;  // rescale the amplitude so that tau0 = 1
};

struct SolverConfig {
  double dr = 2e-3;
  double cfl = 0.8;
  double c2_floor = 0.25;
  double window = 6.0;          // 0: full domain
  double t_max = 0.0;           // 0: horizon exp(2 tau0 / eps)
  double R_max = 0.0;           // 0: derived from t_max
  std::vector<double> thresholds{50.0, 200.0, 800.0};
  double max_node_steps = 2e10; // hard cap per run, 0: none
  int record_stride = 50;
  int path_stride = 4;
};

struct SweepConfig {
  std::vector<double> epsilons{1.0 / 3, 1.0 / 4, 1.0 / 5, 1.0 / 6};
  double budget = 1e12;  // predicted node updates over the whole sweep
};

struct OracleConfig {
  double mu = 0.5;
  std::optional<double> rho0;  // empty: s_star of the lifespan scan
};

struct Config {
  DataConfig data;
  SolverConfig solver;
  SweepConfig sweep;
  OracleConfig oracle;
};

/// INI-style key=value with sections [data], [solver], [sweep], [oracle]; a dotted key such
/// as data.k outside any section is equivalent. In [data], kind/k/amplitude/table address u0,
/// and u0.* / u1.* address either datum explicitly. Unknown keys, malformed lines and
/// invalid combinations throw InputError naming the line.
Config parse_config_text(std::string_view text, const std::string& source = "<config>");
Config parse_config(const std::string& path);

/// Full effective configuration in the same format; parse(dump(c)) == c.
std::string dump_config(const Config& cfg);

/// Reads "1/3" or "0.25" style numbers.
double parse_number(std::string_view text);

/// The initial data described by the config, and the amplitude factor applied by
/// normalize_tau0 (1 when off).
struct BuiltData {
  InitialData data;
  double scale = 1.0;
};
BuiltData build_data(const DataConfig& cfg);

bool operator==(const ProfileSpec& a, const ProfileSpec& b);
bool operator==(const Config& a, const Config& b);

}  // namespace qwblow
