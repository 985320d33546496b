#include <doctest.h>

#include <cmath>

#include "qwblow/errors.hpp"
#include "qwblow/lifespan.hpp"

using namespace qwblow;

namespace {

InitialData bump(int k, double a = 1.0) {
  return {RadialProfile::poly_bump(k, a, 1.0), RadialProfile::zero(1.0)};
}

// Minimum of the lifespan functional from an independent 10^6-point scan refined in
// 30-digit arithmetic.
constexpr double kTau0Data1 = 0.934423452596914410;
constexpr double kSStarData1 = -0.301764646453525675;
constexpr double kTau0Bump5 = 0.8585106566;
constexpr double kTau0U1Bump3 = 5.596849078;

}  // namespace

TEST_CASE("g_log_ratio") {
  CHECK(g_log_ratio(0.0) == 1.0);
  CHECK(g_log_ratio(1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(g_log_ratio(-0.5) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(g_log_ratio(-1.0), InputError);
  CHECK_THROWS_AS(g_log_ratio(-2.0), InputError);
  // continuous across the series switch and strictly decreasing
  CHECK(g_log_ratio(0.99999e-4) == doctest::Approx(g_log_ratio(1.00001e-4)).epsilon(1e-9));
  double prev = g_log_ratio(-0.999);
  for (double z = -0.99; z < 5.0; z += 0.01) {
    const double g = g_log_ratio(z);
    CHECK(g < prev);
    CHECK(g > 0.0);
    prev = g;
  }
}

TEST_CASE("tau_unified on the reference bump") {
  const RadiationField f(bump(4));
  REQUIRE(tau_unified(f, -1.0 / 3.0).has_value());
  CHECK(std::abs(*tau_unified(f, -1.0 / 3.0) - 0.94921875) < 1e-9);
  CHECK(*tau_unified(f, -0.5) == doctest::Approx(2.06266759).epsilon(1e-8));
  CHECK_FALSE(tau_unified(f, 1.0 / 3.0).has_value());
}

TEST_CASE("branch identity with the two-logarithm form") {
  const RadiationField f(bump(4));
  int compared = 0;
  for (int i = 1; i < 2000; ++i) {
    const double s = -1.0 + i / 1000.0;
    const auto a = tau_unified(f, s);
    const auto b = tau_direct(f, s);
    if (!a || !b || std::abs(f.dF(s)) < 1e-3) continue;
    CHECK(*b == doctest::Approx(*a).epsilon(1e-12));
    ++compared;
  }
  CHECK(compared > 100);
}

TEST_CASE("tau0 of the reference bump") {
  const auto est = tau0(RadiationField(bump(4)));
  CHECK(est.tau0 == doctest::Approx(kTau0Data1).epsilon(1e-12));
  CHECK(est.s_star == doctest::Approx(kSStarData1).epsilon(1e-6));
  CHECK(est.branch == Branch::A);
  CHECK(est.grid_n == 20001);
  for (int i = 1; i < 200; ++i) {
    const double s = -1.0 + i / 100.0;
    if (const auto t = tau_unified(RadiationField(bump(4)), s)) CHECK(est.tau0 <= *t);
  }
}

TEST_CASE("tau0 over the corpus") {
  CHECK(tau0(RadiationField(bump(5))).tau0 == doctest::Approx(kTau0Bump5).epsilon(1e-9));
  const RadiationField u1_only({RadialProfile::zero(1.0), RadialProfile::poly_bump(3, 1.0, 1.0)});
  const auto est = tau0(u1_only);
  CHECK(est.tau0 == doctest::Approx(kTau0U1Bump3).epsilon(1e-9));
  CHECK(est.tau0 > 0.0);
}

TEST_CASE("grid stability") {
  const RadiationField f(bump(4));
  CHECK(std::abs(tau0(f, 20001).tau0 - tau0(f, 40001).tau0) < 1e-11);
}

TEST_CASE("scale covariance") {
  const double base = tau0(RadiationField(bump(4))).tau0;
  for (double lambda : {0.5, 2.0, 10.0}) {
    const double scaled = tau0(RadiationField(bump(4).scaled(lambda))).tau0;
    CHECK(std::abs(scaled * lambda - base) / base < 1e-8);
  }
}

TEST_CASE("trivial data and coarse grids are rejected") {
  const RadiationField zero({RadialProfile::zero(1.0), RadialProfile::zero(1.0)});
  CHECK_THROWS_AS(tau0(zero), InputError);
  CHECK_THROWS_AS(tau0(RadiationField(bump(4)), 100), InputError);
}
