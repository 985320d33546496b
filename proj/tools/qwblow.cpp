// qwblow: command-line front end for the lifespan laboratory.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qwblow/approx_solution.hpp"
#include "qwblow/blowup_oracle.hpp"
#include "qwblow/checks.hpp"
#include "qwblow/config.hpp"
#include "qwblow/errors.hpp"
#include "qwblow/lifespan.hpp"
#include "qwblow/profile_solver.hpp"
#include "qwblow/sweep.hpp"
#include "qwblow/wave_solver.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace qwblow;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string num(double x, const char* f = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Config load(const std::string& path) { return path.empty() ? Config{} : parse_config(path); }

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  return out;
}

/// Writes to the file, or to stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

constexpr const char* kPathHeader = "t,r,u,dtu,dru,c,w1,w2,L1u,L2u";

std::string path_csv(const std::vector<PathSample>& path) {
  std::ostringstream out;
  out << kPathHeader << '\n';
  for (const auto& p : path) {
    const auto& f = p.f;
    out << num(p.t, "%.17g") << ',' << num(f.r, "%.17g") << ',' << num(f.u, "%.17g") << ','
        << num(f.dtu, "%.17g") << ',' << num(f.dru, "%.17g") << ',' << num(f.c, "%.17g") << ','
        << num(f.w1, "%.17g") << ',' << num(f.w2, "%.17g") << ',' << num(f.L1u, "%.17g") << ','
        << num(f.L2u, "%.17g") << '\n';
  }
  return out.str();
}

std::vector<PathSample> read_path_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open '" + file.string() + "'");
  std::string line;
  std::getline(in, line);
  if (line != kPathHeader) throw InputError("unexpected header in '" + file.string() + "'");
  std::vector<PathSample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto v = split_csv(line);
    if (v.size() != 10) throw InputError("malformed row in '" + file.string() + "'");
    PathSample p;
    p.t = std::stod(v[0]);
    p.f = {std::stod(v[1]), std::stod(v[2]), std::stod(v[3]), std::stod(v[4]), std::stod(v[5]),
           std::stod(v[6]), std::stod(v[7]), std::stod(v[8]), std::stod(v[9])};
    out.push_back(p);
  }
  return out;
}

json certificate_json(const Certificate& c) {
  return {{"t_eps", c.t_eps},
          {"w_hat", c.w_hat},
          {"seed_measured", c.seed_measured},
          {"seed_predicted", c.seed_predicted},
          {"seed_rel_err", c.seed_rel_err},
          {"K", c.K},
          {"certified", c.certified},
          {"extrapolated", c.extrapolated},
          {"bound_T", c.certified ? json(c.bound_T) : json(nullptr)},
          {"eps_ln_bound", c.certified ? json(c.eps_ln_bound) : json(nullptr)},
          {"note", c.note}};
}

int cmd_tau0(const std::string& config, int grid_n, bool as_json) {
  const Experiment ex(load(config));
  const auto est = tau0(ex.field, grid_n);
  if (as_json) {
    std::cout << json{{"tau0", est.tau0}, {"s_star", est.s_star}, {"branch", to_string(est.branch)}}
                     .dump(2)
              << '\n';
  } else {
    std::printf("tau0    %.15g\ns_star  %.15g\nbranch  %s\n", est.tau0, est.s_star,
                to_string(est.branch).c_str());
  }
  return 0;
}

int cmd_profile(const std::string& config, double tau, int n, const std::string& out) {
  const Experiment ex(load(config));
  const double M = ex.field.support();
  const auto fan = characteristic_fan(ex.field, tau, -M - 2.0, n);
  std::ostringstream csv;
  csv << "s,q,V,dqV,d2qV,dsq\n";
  for (std::size_t i = 0; i < fan.s.size(); ++i) {
    csv << num(fan.s[i]) << ',' << num(fan.q[i]) << ',' << num(fan.V[i]) << ',' << num(fan.w[i])
        << ',' << num(fan.d2V[i]) << ',' << num(fan.dsq[i]) << '\n';
  }
  emit(out, csv.str());
  if (!fan.monotone) std::cerr << "warning: the fan has folded at tau = " << tau << '\n';
  return 0;
}

int cmd_ja_probe(const std::string& config, const std::string& eps_text,
                 const std::string& times, const std::string& out) {
  const Experiment ex(load(config));
  const double eps = parse_number(eps_text);
  if (!(eps > 0.0)) throw InputError("--epsilon must be positive");
  const auto ts = parse_list(times);
  if (ts.empty()) throw InputError("--times is empty");
  const ApproxSolution apx(ex.field, eps, ex.lifespan.tau0);
  std::ostringstream csv;
  csv << "t,supJa\n";
  for (double t : ts) csv << num(t) << ',' << num(sup_ja(apx, t)) << '\n';
  emit(out, csv.str());
  return 0;
}

struct SimulateArgs {
  std::string epsilon;
  double dr = 0.0;
  std::string thresholds;
  double t_max = 0.0;
  std::string out;
  std::string snapshots;
  double snapshot_every = 0.0;
};

int cmd_simulate(const std::string& config, const SimulateArgs& a) {
  auto cfg = load(config);
  if (a.dr > 0.0) cfg.solver.dr = a.dr;
  if (a.t_max > 0.0) cfg.solver.t_max = a.t_max;
  if (!a.thresholds.empty()) cfg.solver.thresholds = parse_list(a.thresholds);
  const double eps = parse_number(a.epsilon);
  if (!(eps > 0.0)) throw InputError("--epsilon must be positive");
  const Experiment ex(cfg);
  auto rc = ex.run_config(eps, cfg.solver.dr);

  fs::path snap_dir;
  if (!a.snapshots.empty()) {
    snap_dir = a.snapshots;
    fs::create_directories(snap_dir);
    rc.snapshot_every = a.snapshot_every > 0.0 ? a.snapshot_every : rc.t_max / 20.0;
    rc.on_snapshot = [&](const WaveState& s) {
      std::ostringstream csv;
      csv << "r,U,dtU\n";
      for (std::size_t i = s.offset; i < std::min(s.front, s.end()); ++i) {
        const auto k = static_cast<std::ptrdiff_t>(i);
        csv << num(s.r(i)) << ',' << num(s.at(k)) << ',' << num((s.at(k) - s.prev_at(k)) / s.dt)
            << '\n';
      }
      emit((snap_dir / ("U_" + num(s.t, "%.6g") + ".csv")).string(), csv.str());
    };
  }

  const auto res = run_to_blowup(rc);
  std::ostringstream csv;
  csv << "t,max_abs_w1,max_abs_w2,min_c2,A,B,C,D\n";
  for (const auto& r : res.rows) {
    csv << num(r.t) << ',' << num(r.max_abs_w1) << ',' << num(r.max_abs_w2) << ','
        << num(r.min_c2) << ',' << num(r.A) << ',' << num(r.B) << ',' << num(r.C) << ','
        << num(r.D) << '\n';
  }
  emit(a.out, csv.str());

  const auto& rep = res.report;
  json summary{{"epsilon", eps},
               {"dr", rep.dr},
               {"cause", to_string(rep.cause)},
               {"t_end", rep.t_end},
               {"steps", rep.steps},
               {"T_star", rep.T_star ? json(*rep.T_star) : json(nullptr)},
               {"tau0", ex.lifespan.tau0},
               {"rho0", ex.rho0()}};
  json crossings = json::array();
  for (const auto& c : rep.crossings) crossings.push_back({{"threshold", c.threshold}, {"t", c.t}});
  summary["crossings"] = crossings;
  if (!snap_dir.empty()) {
    emit((snap_dir / "config.ini").string(), dump_config(cfg));
    emit((snap_dir / "path_rho0.csv").string(), path_csv(res.paths.at(2).samples()));
    emit((snap_dir / "run.json").string(), summary.dump(2) + "\n");
  }
  std::cerr << summary.dump() << '\n';
  return 0;
}

int cmd_sweep(const std::string& config, double dr, const std::string& out,
              const std::string& meta) {
  const Experiment ex(load(config));
  SweepOptions opts;
  if (dr > 0.0) opts.dr = dr;
  opts.on_row = [](const SweepRow& r) {
    std::fprintf(stderr, "eps %-10.6g cause %-19s T_num %-12s t_end %-12.6g %.1fs\n", r.epsilon,
                 to_string(r.cause).c_str(), r.T_num ? num(*r.T_num, "%.6g").c_str() : "-",
                 r.t_end, r.seconds);
  };
  const auto res = run_sweep(ex, opts);
  emit(out, sweep_csv(res));
  std::fprintf(stderr, "trend: %d violation(s), %d row(s) without T_num\n", res.trend.violations,
               res.trend.missing);
  if (!meta.empty()) {
    const auto& s = ex.config.solver;
    json m{{"version", kVersion},
           {"config", dump_config(ex.config)},
           {"tau0", ex.lifespan.tau0},
           {"amplitude_scale", ex.built.scale},
           {"cfl", s.cfl},
           {"thresholds", s.thresholds},
           {"predicted_node_steps", res.predicted_node_steps},
           {"trend_d", res.trend.d},
           {"trend_violations", res.trend.violations}};
    emit(meta, m.dump(2) + "\n");
  }
  return 0;
}

int cmd_oracle(const std::string& run_dir, const std::string& rho0, double mu, bool as_json) {
  const fs::path dir(run_dir);
  auto cfg = parse_config((dir / "config.ini").string());
  std::ifstream meta_in(dir / "run.json");
  if (!meta_in) throw InputError("no run.json in '" + run_dir + "'");
  const auto meta = json::parse(meta_in);
  if (rho0 != "auto") {
    const double want = parse_number(rho0);
    if (std::abs(want - meta.at("rho0").get<double>()) > 1e-12) {
      throw InputError("the run tracked rho0 = " + num(meta.at("rho0").get<double>()) +
                       "; rerun simulate with oracle.rho0 = " + rho0);
    }
  }
  cfg.oracle.mu = mu;
  const Experiment ex(cfg);
  const auto path = read_path_csv(dir / "path_rho0.csv");
  CertifyOptions o;
  o.epsilon = meta.at("epsilon").get<double>();
  o.tau0 = ex.lifespan.tau0;
  o.rho0 = meta.at("rho0").get<double>();
  o.mu = mu;
  const auto cert = certify_from_run(path, ex.field, o);
  auto j = certificate_json(cert);
  j["epsilon"] = o.epsilon;
  j["tau0"] = o.tau0;
  j["rho0"] = o.rho0;
  j["mu"] = mu;
  if (as_json) {
    std::cout << j.dump(2) << '\n';
  } else {
    for (const auto& [k, v] : j.items()) std::cout << k << "  " << v.dump() << '\n';
  }
  return 0;
}

int cmd_selftest(bool fault) {
  SelftestOptions opts;
  if (fault) opts.tau0_factor = 1.01;
  const auto results = run_selftest(opts);
  bool ok = true;
  std::printf("%-28s %-6s %8s  %s\n", "suite", "result", "seconds", "detail");
  for (const auto& r : results) {
    std::printf("%-28s %-6s %8.2f  %s\n", r.name.c_str(), r.pass ? "pass" : "FAIL", r.seconds,
                r.detail.c_str());
    ok = ok && r.pass;
  }
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lifespan laboratory for u_tt - (1 + u + u_t) Lap u = 0 (radial)"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(0, 1);
  std::string config;
  bool dump_flag = false;
  app.add_flag("--dump-config", dump_flag, "print the effective configuration and exit");
  app.add_option("--config", config, "run config (INI)")->check(CLI::ExistingFile);

  auto* tau0_cmd = app.add_subcommand("tau0", "minimise the lifespan functional");
  int grid_n = 20001;
  bool tau0_json = false;
  tau0_cmd->add_option("--config", config, "run config (INI)")->check(CLI::ExistingFile);
  tau0_cmd->add_option("--grid-n", grid_n, "scan resolution")->capture_default_str();
  tau0_cmd->add_flag("--json", tau0_json, "JSON output");

  auto* profile_cmd = app.add_subcommand("profile", "characteristic fan at slow time tau");
  double tau = 0.0;
  int fan_n = 1001;
  std::string fan_out;
  profile_cmd->add_option("--config", config, "run config (INI)")->check(CLI::ExistingFile);
  profile_cmd->add_option("--tau", tau, "slow time")->required();
  profile_cmd->add_option("--n", fan_n, "number of characteristics")->capture_default_str();
  profile_cmd->add_option("--out", fan_out, "CSV output (default stdout)");

  auto* ja_cmd = app.add_subcommand("ja-probe", "sup_r |J_a| of the approximate solution");
  std::string ja_eps, ja_times, ja_out;
  ja_cmd->add_option("--config", config, "run config (INI)")->check(CLI::ExistingFile);
  ja_cmd->add_option("--epsilon", ja_eps, "amplitude, e.g. 0.2 or 1/5")->required();
  ja_cmd->add_option("--times", ja_times, "comma separated times")->required();
  ja_cmd->add_option("--out", ja_out, "CSV output (default stdout)");

  auto* sim_cmd = app.add_subcommand("simulate", "one run of the reduced solver");
  SimulateArgs sim;
  sim_cmd->add_option("--config", config, "run config (INI)")->check(CLI::ExistingFile);
  sim_cmd->add_option("--epsilon", sim.epsilon, "amplitude, e.g. 0.25 or 1/4")->required();
  sim_cmd->add_option("--dr", sim.dr, "grid step (default solver.dr)");
  sim_cmd->add_option("--thresholds", sim.thresholds, "max|w1| thresholds, ascending");
  sim_cmd->add_option("--tmax", sim.t_max, "horizon (default exp(2 tau0 / eps))");
  sim_cmd->add_option("--out", sim.out, "run CSV (default stdout)");
  sim_cmd->add_option("--snapshots", sim.snapshots, "directory for U_<t>.csv and path data");
  sim_cmd->add_option("--snapshot-every", sim.snapshot_every, "snapshot cadence in t");

  auto* sweep_cmd = app.add_subcommand("sweep", "one run per epsilon, lifespan table");
  double sweep_dr = 0.0;
  std::string sweep_out, sweep_meta;
  sweep_cmd->add_option("--config", config, "run config (INI)")->check(CLI::ExistingFile);
  sweep_cmd->add_option("--dr", sweep_dr, "grid step (default solver.dr)");
  sweep_cmd->add_option("--out", sweep_out, "CSV output (default stdout)");
  sweep_cmd->add_option("--meta", sweep_meta, "JSON metadata output");

  auto* oracle_cmd = app.add_subcommand("oracle", "Riccati certificate from a simulate directory");
  std::string run_dir, rho0_arg = "auto";
  double mu = 0.5;
  bool oracle_json = false;
  oracle_cmd->add_option("--run", run_dir, "simulate --snapshots directory")->required();
  oracle_cmd->add_option("--rho0", rho0_arg, "must match the tracked path, or auto")
      ->capture_default_str();
  oracle_cmd->add_option("--mu", mu, "start at exp(mu tau0 / eps) - 1")->capture_default_str();
  oracle_cmd->add_flag("--json", oracle_json, "JSON output");

  auto* self_cmd = app.add_subcommand("selftest", "fast invariant suites");
  bool fault = false;
  self_cmd->add_flag("--inject-fault", fault, "perturb tau0 by 1% to exercise the harness");

  auto* dump_cmd = app.add_subcommand("dump-config", "print the effective configuration");
  dump_cmd->add_option("--config", config, "run config (INI)")->check(CLI::ExistingFile);

  app.footer(
      "Config defaults ([section] key = value):\n"
      "  [data]   M = 1, kind = poly_bump, k = 4, amplitude = 1, table = (path s,value),\n"
      "           u1.kind = zero, normalize_tau0 = false\n"
      "  [solver] dr = 0.002, cfl = 0.8, c2_floor = 0.25, window = 6 (0: full domain),\n"
      "           t_max = 0 (exp(2 tau0/eps)), R_max = 0 (auto), thresholds = 50,200,800,\n"
      "           max_node_steps = 2e10, record_stride = 50, path_stride = 4\n"
      "  [sweep]  epsilons = 1/3,1/4,1/5,1/6, budget = 1e12\n"
      "  [oracle] mu = 0.5, rho0 = auto\n"
      "Exit codes: 0 success, 1 invalid input, 2 runtime failure, 3 selftest failure.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (dump_flag || dump_cmd->parsed()) {
      std::cout << dump_config(load(config));
      return 0;
    }
    if (tau0_cmd->parsed()) return cmd_tau0(config, grid_n, tau0_json);
    if (profile_cmd->parsed()) return cmd_profile(config, tau, fan_n, fan_out);
    if (ja_cmd->parsed()) return cmd_ja_probe(config, ja_eps, ja_times, ja_out);
    if (sim_cmd->parsed()) return cmd_simulate(config, sim);
    if (sweep_cmd->parsed()) return cmd_sweep(config, sweep_dr, sweep_out, sweep_meta);
    if (oracle_cmd->parsed()) return cmd_oracle(run_dir, rho0_arg, mu, oracle_json);
    if (self_cmd->parsed()) return cmd_selftest(fault);
    std::cerr << app.help();
    return 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 2;
  }
}
