#include "qwblow/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qwblow/errors.hpp"
#include "qwblow/lifespan.hpp"

namespace qwblow {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt_double(v[i]);
  }
  return out;
}

double parse_plain(std::string_view s) {
  s = trim(s);
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw InputError("not a number: '" + std::string(s) + "'");
  }
  return x;
}

int parse_int(std::string_view s) {
  s = trim(s);
  int x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw InputError("not an integer: '" + std::string(s) + "'");
  }
  return x;
}

bool parse_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw InputError("not a boolean: '" + std::string(s) + "'");
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  s = trim(s);
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const auto item = s.substr(pos, comma == std::string_view::npos ? s.size() - pos : comma - pos);
    out.push_back(parse_number(item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

ProfileSpec::Kind parse_kind(std::string_view s) {
  s = trim(s);
  if (s == "zero") return ProfileSpec::Kind::zero;
  if (s == "poly_bump") return ProfileSpec::Kind::poly_bump;
  if (s == "sample_table") return ProfileSpec::Kind::sample_table;
  throw InputError("unknown profile kind '" + std::string(s) + "'");
}

std::string kind_name(ProfileSpec::Kind k) {
  switch (k) {
    case ProfileSpec::Kind::zero:
      return "zero";
    case ProfileSpec::Kind::poly_bump:
      return "poly_bump";
    case ProfileSpec::Kind::sample_table:
      return "sample_table";
  }
  return "zero";
}

bool set_profile_key(ProfileSpec& p, std::string_view key, std::string_view value) {
  if (key == "kind") {
    p.kind = parse_kind(value);
  } else if (key == "k") {
    p.k = parse_int(value);
  } else if (key == "amplitude") {
    p.amplitude = parse_number(value);
  } else if (key == "table") {
    p.table = std::string(trim(value));
  } else {
    return false;
  }
  return true;
}

bool set_key(Config& c, const std::string& key, std::string_view v) {
  auto& d = c.data;
  auto& s = c.solver;
  if (key == "data.M") {
    d.M = parse_number(v);
  } else if (key == "data.normalize_tau0") {
    d.normalize_tau0 = parse_bool(v);
  } else if (key.rfind("data.u0.", 0) == 0) {
    return set_profile_key(d.u0, std::string_view(key).substr(8), v);
  } else if (key.rfind("data.u1.", 0) == 0) {
    return set_profile_key(d.u1, std::string_view(key).substr(8), v);
  } else if (key.rfind("data.", 0) == 0) {
    return set_profile_key(d.u0, std::string_view(key).substr(5), v);
  } else if (key == "solver.dr") {
    s.dr = parse_number(v);
  } else if (key == "solver.cfl") {
    s.cfl = parse_number(v);
  } else if (key == "solver.c2_floor") {
    s.c2_floor = parse_number(v);
  } else if (key == "solver.window") {
    s.window = parse_number(v);
  } else if (key == "solver.t_max") {
    s.t_max = parse_number(v);
  } else if (key == "solver.R_max") {
    s.R_max = parse_number(v);
  } else if (key == "solver.thresholds") {
    s.thresholds = parse_list(v);
  } else if (key == "solver.max_node_steps") {
    s.max_node_steps = parse_number(v);
  } else if (key == "solver.record_stride") {
    s.record_stride = parse_int(v);
  } else if (key == "solver.path_stride") {
    s.path_stride = parse_int(v);
  } else if (key == "sweep.epsilons") {
    c.sweep.epsilons = parse_list(v);
  } else if (key == "sweep.budget") {
    c.sweep.budget = parse_number(v);
  } else if (key == "oracle.mu") {
    c.oracle.mu = parse_number(v);
  } else if (key == "oracle.rho0") {
    const auto t = trim(v);
    if (t == "auto" || t.empty()) {
      c.oracle.rho0.reset();
    } else {
      c.oracle.rho0 = parse_number(t);
    }
  } else {
    return false;
  }
  return true;
}

void validate_profile(const ProfileSpec& p, const char* name) {
  const std::string n(name);
  if (p.kind == ProfileSpec::Kind::poly_bump && p.k < 3) {
    throw InputError("data." + n + ".k must be >= 3 for a C^2 bump");
  }
  if (!std::isfinite(p.amplitude)) throw InputError("data." + n + ".amplitude must be finite");
  if (p.kind == ProfileSpec::Kind::sample_table && p.table.empty()) {
    throw InputError("data." + n + ".kind = sample_table needs data." + n + ".table");
  }
}

void validate(const Config& c) {
  if (!(c.data.M > 0.0) || !std::isfinite(c.data.M)) throw InputError("data.M must be positive");
  validate_profile(c.data.u0, "u0");
  validate_profile(c.data.u1, "u1");
  const auto& s = c.solver;
  if (!(s.dr > 0.0)) throw InputError("solver.dr must be positive");
  if (!(s.cfl > 0.0 && s.cfl <= 1.0)) throw InputError("solver.cfl must lie in (0, 1]");
  if (!(s.c2_floor >= 0.0 && s.c2_floor < 1.0)) throw InputError("solver.c2_floor must lie in [0, 1)");
  if (!(s.window >= 0.0)) throw InputError("solver.window must be >= 0");
  if (!(s.t_max >= 0.0) || !(s.R_max >= 0.0)) throw InputError("solver.t_max and solver.R_max must be >= 0");
  if (s.thresholds.empty()) throw InputError("solver.thresholds must not be empty");
  for (std::size_t i = 0; i < s.thresholds.size(); ++i) {
    if (!(s.thresholds[i] > 0.0) || (i && !(s.thresholds[i] > s.thresholds[i - 1]))) {
      throw InputError("solver.thresholds must be positive and ascending");
    }
  }
  if (!(s.max_node_steps >= 0.0)) throw InputError("solver.max_node_steps must be >= 0");
  if (s.record_stride < 1 || s.path_stride < 1) throw InputError("solver strides must be >= 1");
  for (double e : c.sweep.epsilons) {
    if (!(e > 0.0) || !std::isfinite(e)) throw InputError("sweep.epsilons must be positive");
  }
  if (!(c.sweep.budget > 0.0)) throw InputError("sweep.budget must be positive");
  if (!(c.oracle.mu > 0.0 && c.oracle.mu < 1.0)) throw InputError("oracle.mu must lie in (0, 1)");
}

}  // namespace

double parse_number(std::string_view text) {
  const auto t = trim(text);
  const auto slash = t.find('/');
  if (slash == std::string_view::npos) return parse_plain(t);
  const double den = parse_plain(t.substr(slash + 1));
  if (den == 0.0) throw InputError("zero denominator in '" + std::string(t) + "'");
  return parse_plain(t.substr(0, slash)) / den;
}

Config parse_config_text(std::string_view text, const std::string& source) {
  Config cfg;
  std::string section;
  std::size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    const auto where = source + ":" + std::to_string(lineno) + ": ";
    const auto hash = line.find_first_of("#;");
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InputError(where + "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "data" && section != "solver" && section != "sweep" && section != "oracle") {
        throw InputError(where + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InputError(where + "expected key = value");
    const auto key = std::string(trim(line.substr(0, eq)));
    if (key.empty()) throw InputError(where + "empty key");
    const auto full = section.empty() ? key : section + "." + key;
    try {
      if (!set_key(cfg, full, line.substr(eq + 1))) throw InputError("unknown key '" + full + "'");
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
  }
  try {
    validate(cfg);
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
  return cfg;
}

Config parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string dump_config(const Config& c) {
  std::ostringstream out;
  auto profile = [&](const char* name, const ProfileSpec& p) {
    out << name << ".kind = " << kind_name(p.kind) << "\n";
    out << name << ".k = " << p.k << "\n";
    out << name << ".amplitude = " << fmt_double(p.amplitude) << "\n";
    out << name << ".table = " << p.table << "\n";
  };
  out << "[data]\n";
  out << "M = " << fmt_double(c.data.M) << "\n";
  out << "normalize_tau0 = " << (c.data.normalize_tau0 ? "true" : "false") << "\n";
  profile("u0", c.data.u0);
  profile("u1", c.data.u1);
  const auto& s = c.solver;
  out << "\n[solver]\n";
  out << "dr = " << fmt_double(s.dr) << "\n";
  out << "cfl = " << fmt_double(s.cfl) << "\n";
  out << "c2_floor = " << fmt_double(s.c2_floor) << "\n";
  out << "window = " << fmt_double(s.window) << "\n";
  out << "t_max = " << fmt_double(s.t_max) << "\n";
  out << "R_max = " << fmt_double(s.R_max) << "\n";
  out << "thresholds = " << fmt_list(s.thresholds) << "\n";
  out << "max_node_steps = " << fmt_double(s.max_node_steps) << "\n";
  out << "record_stride = " << s.record_stride << "\n";
  out << "path_stride = " << s.path_stride << "\n";
  out << "\n[sweep]\n";
  out << "epsilons = " << fmt_list(c.sweep.epsilons) << "\n";
  out << "budget = " << fmt_double(c.sweep.budget) << "\n";
  out << "\n[oracle]\n";
  out << "mu = " << fmt_double(c.oracle.mu) << "\n";
  out << "rho0 = " << (c.oracle.rho0 ? fmt_double(*c.oracle.rho0) : std::string("auto")) << "\n";
  return out.str();
}

BuiltData build_data(const DataConfig& cfg) {
  BuiltData b;
  b.data = InitialData{make_profile(cfg.u0, cfg.M), make_profile(cfg.u1, cfg.M)};
  if (cfg.normalize_tau0) {
    const auto est = tau0(RadiationField(b.data));
    b.scale = est.tau0;
    b.data = b.data.scaled(b.scale);
  }
  return b;
}

bool operator==(const ProfileSpec& a, const ProfileSpec& b) {
  return a.kind == b.kind && a.k == b.k && a.amplitude == b.amplitude && a.table == b.table;
}

bool operator==(const Config& a, const Config& b) { return dump_config(a) == dump_config(b); }

}  // namespace qwblow
