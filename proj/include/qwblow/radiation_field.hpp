#pragma once

#include <memory>
#include <string>
#include <vector>

namespace qwblow {

/// Value and first two derivatives of a scalar function at a point.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Descriptor of one radial datum, as read from a run config.
struct ProfileSpec {
  enum class Kind { zero, poly_bump, sample_table };
  Kind kind = Kind::zero;
  int k = 4;
  double amplitude = 1.0;
  std::string table;  // path of a two-column CSV s,value (sample_table only)
};

/// Compactly supported even radial profile on [-M, M], extended by zero.
///
/// Two families: a * (1 - (s/M)^2)^k with exact derivatives, and a natural cubic spline
/// through tabulated samples. Instances are immutable and cheap to copy.
class RadialProfile {
 public:
  static RadialProfile zero(double M);
  static RadialProfile poly_bump(int k, double amplitude, double M);
  static RadialProfile sample_table(std::vector<double> nodes, std::vector<double> values,
                                    double M);

  [[nodiscard]] double support() const { return M_; }
  [[nodiscard]] bool is_zero() const { return kind_ == ProfileSpec::Kind::zero; }
  [[nodiscard]] ProfileSpec::Kind kind() const { return kind_; }

  [[nodiscard]] Jet jet(double s) const;
  [[nodiscard]] double operator()(double s) const { return jet(s).value; }

  /// The same profile multiplied by lambda.
  [[nodiscard]] RadialProfile scaled(double lambda) const;

 private:
  struct Spline;

  ProfileSpec::Kind kind_ = ProfileSpec::Kind::zero;
  double M_ = 1.0;
  int k_ = 0;
  double amplitude_ = 0.0;
  std::shared_ptr<const Spline> spline_;
};

/// Reads a two-column CSV (s,value; optional header) and builds a spline profile.
RadialProfile load_profile_table(const std::string& path, double M);

RadialProfile make_profile(const ProfileSpec& spec, double M);

/// A pair of initial data (u0, u1) sharing the support radius M.
struct InitialData {
  RadialProfile u0;
  RadialProfile u1;

  [[nodiscard]] double support() const { return u0.support(); }
  [[nodiscard]] InitialData scaled(double lambda) const {
    return {u0.scaled(lambda), u1.scaled(lambda)};
  }
};

/// The Friedlander radiation field F(s) = 1/2 (s u0(s) + int_s^inf sigma u1(sigma) dsigma).
///
/// F is obtained by adaptive quadrature of the tail integral; F' and F'' are closed form.
class RadiationField {
 public:
  RadiationField(InitialData data, double quad_tol = 1e-12);

  [[nodiscard]] double support() const { return data_.support(); }
  [[nodiscard]] const InitialData& data() const { return data_; }
  [[nodiscard]] double quad_tol() const { return quad_tol_; }

  [[nodiscard]] double F(double s) const;
  [[nodiscard]] double dF(double s) const;
  [[nodiscard]] double d2F(double s) const;

  struct Slopes {
    double dF = 0.0;
    double d2F = 0.0;
  };
  /// F' and F'' together; cheaper than two separate calls.
  [[nodiscard]] Slopes slopes(double s) const;

  /// True when F' and F'' vanish on a dense grid, i.e. the data are trivial.
  [[nodiscard]] bool is_trivial() const { return trivial_; }

 private:
  InitialData data_;
  double quad_tol_;
  bool trivial_ = false;
};

RadiationField radiation_field(const RadialProfile& u0, const RadialProfile& u1,
                               double quad_tol = 1e-12);

}  // namespace qwblow
