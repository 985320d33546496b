#include "qwblow/radiation_field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qwblow/errors.hpp"
#include "qwblow/numerics.hpp"

namespace qwblow {

// Natural cubic spline; m holds the second derivatives at the nodes.
struct RadialProfile::Spline {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> m;

  Spline(std::vector<double> xs, std::vector<double> ys) : x(std::move(xs)), y(std::move(ys)) {
    const std::size_t n = x.size();
    m.assign(n, 0.0);
    if (n < 3) return;
    // Thomas algorithm on the interior equations.
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x[i] - x[i - 1];
      const double h1 = x[i + 1] - x[i];
      const double a = h0 / 6.0;
      const double b = (h0 + h1) / 3.0;
      const double cc = h1 / 6.0;
      const double rhs = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
      const double denom = b - a * c[i - 1];
      c[i] = cc / denom;
      d[i] = (rhs - a * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m[i] = d[i] - c[i] * m[i + 1];
    }
  }

  [[nodiscard]] Jet eval(double s) const {
    const auto it = std::upper_bound(x.begin(), x.end(), s);
    std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
    i = std::min(i, x.size() - 2);
    const double h = x[i + 1] - x[i];
    const double a = (x[i + 1] - s) / h;
    const double b = (s - x[i]) / h;
    Jet j;
    j.value = a * y[i] + b * y[i + 1] + ((a * a * a - a) * m[i] + (b * b * b - b) * m[i + 1]) * h * h / 6.0;
    j.d1 = (y[i + 1] - y[i]) / h + ((1.0 - 3.0 * a * a) * m[i] + (3.0 * b * b - 1.0) * m[i + 1]) * h / 6.0;
    j.d2 = a * m[i] + b * m[i + 1];
    return j;
  }
};

RadialProfile RadialProfile::zero(double M) {
  if (!(M > 0.0) || !std::isfinite(M)) throw InputError("profile: support radius M must be positive");
  RadialProfile p;
  p.M_ = M;
  return p;
}

RadialProfile RadialProfile::poly_bump(int k, double amplitude, double M) {
  if (!(M > 0.0) || !std::isfinite(M)) throw InputError("profile: support radius M must be positive");
  if (k < 3) throw InputError("profile: poly_bump needs k >= 3 for C^2 regularity at |s| = M");
  if (!std::isfinite(amplitude)) throw InputError("profile: amplitude must be finite");
  RadialProfile p;
  p.kind_ = ProfileSpec::Kind::poly_bump;
  p.M_ = M;
  p.k_ = k;
  p.amplitude_ = amplitude;
  return p;
}

RadialProfile RadialProfile::sample_table(std::vector<double> nodes, std::vector<double> values,
                                          double M) {
  if (!(M > 0.0) || !std::isfinite(M)) throw InputError("profile: support radius M must be positive");
  if (nodes.size() != values.size() || nodes.size() < 4) {
    throw InputError("profile: sample table needs at least four (s, value) pairs");
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) throw InputError("profile: table nodes must be strictly increasing");
  }
  const double slack = 1e-12 * M;
  if (nodes.front() > -M + slack || nodes.back() < M - slack) {
    throw InputError("profile: table nodes must span [-M, M]");
  }
  RadialProfile p;
  p.kind_ = ProfileSpec::Kind::sample_table;
  p.M_ = M;
  p.amplitude_ = 1.0;
  p.spline_ = std::make_shared<const Spline>(std::move(nodes), std::move(values));
  return p;
}

Jet RadialProfile::jet(double s) const {
  if (kind_ == ProfileSpec::Kind::zero || std::abs(s) >= M_) return {};
  if (kind_ == ProfileSpec::Kind::poly_bump) {
    const double x = s / M_;
    const double base = 1.0 - x * x;
    const double pk2 = std::pow(base, k_ - 2);
    const double pk1 = pk2 * base;
    Jet j;
    j.value = amplitude_ * pk1 * base;
    j.d1 = amplitude_ * k_ * pk1 * (-2.0 * x / M_);
    j.d2 = amplitude_ * (k_ * (k_ - 1) * pk2 * 4.0 * x * x - 2.0 * k_ * pk1) / (M_ * M_);
    return j;
  }
  Jet j = spline_->eval(s);
  j.value *= amplitude_;
  j.d1 *= amplitude_;
  j.d2 *= amplitude_;
  return j;
}

RadialProfile RadialProfile::scaled(double lambda) const {
  RadialProfile p = *this;
  p.amplitude_ *= lambda;
  return p;
}

RadialProfile load_profile_table(const std::string& path, double M) {
  std::ifstream in(path);
  if (!in) throw InputError("profile: cannot open table '" + path + "'");
  std::vector<double> s, v;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double a = 0.0, b = 0.0;
    if (!(ss >> a >> b)) {
      if (lineno == 1) continue;  // header
      throw InputError("profile: malformed table line " + std::to_string(lineno) + " in " + path);
    }
    s.push_back(a);
    v.push_back(b);
  }
  return RadialProfile::sample_table(std::move(s), std::move(v), M);
}

RadialProfile make_profile(const ProfileSpec& spec, double M) {
  switch (spec.kind) {
    case ProfileSpec::Kind::zero:
      return RadialProfile::zero(M);
    case ProfileSpec::Kind::poly_bump:
      return RadialProfile::poly_bump(spec.k, spec.amplitude, M);
    case ProfileSpec::Kind::sample_table:
      if (spec.table.empty()) throw InputError("profile: sample_table requires a table path");
      return load_profile_table(spec.table, M).scaled(spec.amplitude);
  }
  throw InputError("profile: unknown kind");
}

RadiationField::RadiationField(InitialData data, double quad_tol)
    : data_(std::move(data)), quad_tol_(quad_tol) {
  if (data_.u0.support() != data_.u1.support()) {
    throw InputError("radiation_field: u0 and u1 must share the support radius M");
  }
  if (!(quad_tol_ > 0.0)) throw InputError("radiation_field: quadrature tolerance must be positive");
  const double M = support();
  trivial_ = true;
  constexpr int kProbe = 4001;
  for (int i = 1; i < kProbe && trivial_; ++i) {
    const double s = -M + 2.0 * M * i / kProbe;
    const auto sl = slopes(s);
    if (sl.dF != 0.0 || sl.d2F != 0.0) trivial_ = false;
  }
}

double RadiationField::F(double s) const {
  const double M = support();
  if (std::abs(s) >= M) return 0.0;
  double tail = 0.0;
  if (!data_.u1.is_zero()) {
    const auto& u1 = data_.u1;
    tail = numerics::adaptive_simpson([&](double x) { return x * u1(x); }, s, M, quad_tol_);
  }
  return 0.5 * (s * data_.u0(s) + tail);
}

RadiationField::Slopes RadiationField::slopes(double s) const {
  if (std::abs(s) >= support()) return {};
  const Jet a = data_.u0.jet(s);
  const Jet b = data_.u1.jet(s);
  return {0.5 * (a.value + s * a.d1 - s * b.value),
          0.5 * (2.0 * a.d1 + s * a.d2 - b.value - s * b.d1)};
}

double RadiationField::dF(double s) const { return slopes(s).dF; }
double RadiationField::d2F(double s) const { return slopes(s).d2F; }

RadiationField radiation_field(const RadialProfile& u0, const RadialProfile& u1, double quad_tol) {
  return RadiationField(InitialData{u0, u1}, quad_tol);
}

}  // namespace qwblow
