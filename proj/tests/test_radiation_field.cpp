#include <doctest.h>

#include <cmath>
#include <vector>

#include "qwblow/errors.hpp"
#include "qwblow/numerics.hpp"
#include "qwblow/radiation_field.hpp"

using namespace qwblow;

namespace {

InitialData data1() { return {RadialProfile::poly_bump(4, 1.0, 1.0), RadialProfile::zero(1.0)}; }

}  // namespace

TEST_CASE("poly_bump values and support") {
  const auto p = RadialProfile::poly_bump(4, 1.0, 1.0);
  CHECK(p(0.0) == doctest::Approx(1.0));
  CHECK(p(1.0) == 0.0);
  CHECK(p(-1.0) == 0.0);
  CHECK(p(0.5) == doctest::Approx(0.31640625).epsilon(1e-15));
  CHECK(p.jet(2.0).value == 0.0);
  CHECK(p.jet(2.0).d1 == 0.0);
  CHECK(p.jet(-0.3).value == doctest::Approx(p.jet(0.3).value));
  CHECK(p.jet(-0.3).d1 == doctest::Approx(-p.jet(0.3).d1));
}

TEST_CASE("poly_bump is C2 at the support edge for k >= 3") {
  const auto p = RadialProfile::poly_bump(3, 2.0, 1.5);
  const auto inside = p.jet(1.5 - 1e-7);
  CHECK(std::abs(inside.value) < 1e-12);
  CHECK(std::abs(inside.d1) < 1e-9);
  CHECK(std::abs(inside.d2) < 1e-5);
  CHECK(p.jet(1.5).d2 == 0.0);
}

TEST_CASE("profile preconditions") {
  CHECK_THROWS_AS(RadialProfile::poly_bump(2, 1.0, 1.0), InputError);
  CHECK_THROWS_AS(RadialProfile::poly_bump(4, 1.0, 0.0), InputError);
  CHECK_THROWS_AS(RadialProfile::poly_bump(4, NAN, 1.0), InputError);
  CHECK_THROWS_AS(RadialProfile::sample_table({-1.0, 0.5, 0.0, 1.0}, {0, 1, 1, 0}, 1.0), InputError);
  CHECK_THROWS_AS(RadialProfile::sample_table({-0.5, 0.0, 1.0}, {0, 1, 0}, 1.0), InputError);
}

TEST_CASE("radiation field of the reference bump") {
  const RadiationField f(data1());
  CHECK(f.F(0.5) == doctest::Approx(0.0791015625).epsilon(1e-13));
  CHECK(f.dF(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(f.d2F(-1.0 / 3.0) == doctest::Approx(512.0 / 243.0).epsilon(1e-13));
  const double h = 1e-5;
  for (double s : {-0.7, -1.0 / 3.0, 0.1, 0.6}) {
    CHECK(f.dF(s) == doctest::Approx((f.F(s + h) - f.F(s - h)) / (2 * h)).epsilon(1e-8));
    CHECK(f.d2F(s) == doctest::Approx((f.dF(s + h) - f.dF(s - h)) / (2 * h)).epsilon(1e-8));
  }
  for (double s : {0.1, 0.45, 0.8}) CHECK(f.F(-s) == doctest::Approx(-f.F(s)).epsilon(1e-14));
  for (double s : {-3.0, -1.0, 1.0, 1.7}) {
    CHECK(f.F(s) == 0.0);
    CHECK(f.dF(s) == 0.0);
    CHECK(f.d2F(s) == 0.0);
  }
}

TEST_CASE("zero data give a trivial field") {
  const RadiationField f({RadialProfile::zero(1.0), RadialProfile::zero(1.0)});
  CHECK(f.is_trivial());
  for (double s : {-0.5, 0.0, 0.7}) CHECK(f.F(s) == 0.0);
  CHECK_FALSE(RadiationField(data1()).is_trivial());
}

TEST_CASE("mismatched support radii are rejected") {
  CHECK_THROWS_AS(radiation_field(RadialProfile::poly_bump(4, 1.0, 1.0),
                                  RadialProfile::poly_bump(4, 1.0, 2.0)),
                  InputError);
}

TEST_CASE("tail quadrature converges at fourth order") {
  const auto u1 = RadialProfile::poly_bump(3, 1.0, 1.0);
  const RadiationField f({RadialProfile::zero(1.0), u1});
  auto integrand = [&](double x) { return x * u1(x); };
  const double s = -0.4;
  std::vector<double> err;
  for (int n : {8, 16, 32}) err.push_back(std::abs(f.F(s) - 0.5 * numerics::composite_simpson(integrand, s, 1.0, n)));
  CHECK(std::log2(err[0] / err[1]) > 3.7);
  CHECK(std::log2(err[1] / err[2]) > 3.7);
  // closed form: F = (1 - s^2)^4 / 16
  CHECK(f.F(s) == doctest::Approx(std::pow(1 - s * s, 4) / 16.0).epsilon(1e-12));
}

TEST_CASE("derivative consistency of centered differences is second order") {
  const RadiationField f({RadialProfile::poly_bump(5, 1.0, 1.0), RadialProfile::poly_bump(3, 0.5, 1.0)});
  auto max_err = [&](double h) {
    double e = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double s = -0.95 + 1.9 * i / 1000.0;
      e = std::max(e, std::abs(f.dF(s) - (f.F(s + h) - f.F(s - h)) / (2 * h)));
    }
    return e;
  };
  CHECK(std::log2(max_err(1e-2) / max_err(5e-3)) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("sample table reproduces the bump") {
  std::vector<double> s, v;
  for (int i = 0; i <= 2000; ++i) {
    s.push_back(-1.0 + i / 1000.0);
    v.push_back(std::pow(1 - s.back() * s.back(), 4));
  }
  const RadiationField table({RadialProfile::sample_table(s, v, 1.0), RadialProfile::zero(1.0)});
  const RadiationField exact(data1());
  for (double x : {-0.6, -0.2, 0.3, 0.5}) {
    CHECK(table.F(x) == doctest::Approx(exact.F(x)).epsilon(1e-6));
    CHECK(table.dF(x) == doctest::Approx(exact.dF(x)).epsilon(1e-5));
  }
}

TEST_CASE("scaling multiplies the field") {
  const RadiationField f(data1());
  const RadiationField g(data1().scaled(2.5));
  CHECK(g.F(0.3) == doctest::Approx(2.5 * f.F(0.3)).epsilon(1e-13));
  CHECK(g.d2F(-0.3) == doctest::Approx(2.5 * f.d2F(-0.3)).epsilon(1e-13));
}
