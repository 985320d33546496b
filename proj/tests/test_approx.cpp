#include <doctest.h>

#include <cmath>
#include <random>

#include "qwblow/approx_solution.hpp"
#include "qwblow/checks.hpp"
#include "qwblow/errors.hpp"
#include "qwblow/lifespan.hpp"

using namespace qwblow;

namespace {

const RadiationField& data1() {
  static const RadiationField f(reference_data());
  return f;
}

double tau0_1() {
  static const double t = tau0(data1()).tau0;
  return t;
}

}  // namespace

TEST_CASE("cutoff") {
  const auto a = cutoff_chi(0.5);
  CHECK(a.value == 1.0);
  CHECK(a.d1 == 0.0);
  CHECK(a.d2 == 0.0);
  const auto b = cutoff_chi(3.0);
  CHECK(b.value == 0.0);
  CHECK(b.d1 == 0.0);
  CHECK(b.d2 == 0.0);
  CHECK(cutoff_chi(1.5).value == doctest::Approx(0.5).epsilon(1e-15));
  const double h = 1e-5;
  for (double x : {1.2, 1.5, 1.8}) {
    CHECK(cutoff_chi(x).d1 == doctest::Approx((cutoff_chi(x + h).value - cutoff_chi(x - h).value) / (2 * h)).epsilon(1e-7));
    CHECK(cutoff_chi(x).d2 == doctest::Approx((cutoff_chi(x + h).d1 - cutoff_chi(x - h).d1) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("linear wave") {
  const InitialData d{RadialProfile::poly_bump(4, 1.0, 1.0), RadialProfile::poly_bump(3, 0.7, 1.0)};
  for (double r : {0.2, 0.5, 0.9, 1.4}) {
    const auto w = linear_wave(d, 0.0, r);
    CHECK(w.w0 == doctest::Approx(d.u0(r)).epsilon(1e-12));
    CHECK(w.dt_w0 == doctest::Approx(d.u1(r)).epsilon(1e-12));
  }
  for (double t : {3.0, 10.0}) {
    const auto w = linear_wave(d, t, t - 1.5);
    CHECK(std::abs(w.w0) < 1e-15);
    CHECK(std::abs(w.dt_w0) < 1e-15);
    CHECK(linear_wave(d, t, t + 1.2).w0 == 0.0);
  }
  // the wave equation: R_tt == R_rr is built in, check R_t against a difference quotient
  const double h = 1e-5;
  const auto m = linear_wave(d, 2.0, 1.7);
  CHECK(m.Rt == doctest::Approx((linear_wave(d, 2.0 + h, 1.7).R - linear_wave(d, 2.0 - h, 1.7).R) / (2 * h)).epsilon(1e-7));
  CHECK(m.Rtr == doctest::Approx((linear_wave(d, 2.0, 1.7 + h).Rt - linear_wave(d, 2.0, 1.7 - h).Rt) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("approximate solution regions") {
  const double eps = 0.2;
  const ApproxSolution apx(data1(), eps, tau0_1());
  // t <= 1/eps: eps w0
  for (double r : {0.3, 2.0, 4.5}) {
    const auto v = u_approx(apx, 4.0, r);
    CHECK(v.u == doctest::Approx(eps * linear_wave(data1().data(), 4.0, r).w0).epsilon(1e-12));
  }
  CHECK(u_approx(apx, 0.0, 0.4).u == doctest::Approx(eps * data1().data().u0(0.4)).epsilon(1e-12));
  // t >= 2/eps: profile, zero beyond the support
  const double t = 15.0;
  const ProfileEvaluator ev(data1(), eps * std::log1p(t));
  CHECK(u_approx(apx, t, t + 1.3).u == 0.0);
  for (double q : {-1.2, -0.4, 0.0, 0.6}) {
    const double r = t + q;
    CHECK(u_approx(apx, t, r).u * r / eps == doctest::Approx(ev.at(q).V).epsilon(1e-12));
  }
  CHECK_THROWS_AS(u_approx(apx, std::exp(tau0_1() / eps), 1.0), FoldError);
}

TEST_CASE("analytic derivatives match differences") {
  const double eps = 0.25;
  const ApproxSolution apx(data1(), eps, tau0_1());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> tt(0.5, 40.0), qq(-1.5, 1.0);
  const double h = 1e-5;
  for (int k = 0; k < 100; ++k) {
    const double t = tt(rng);
    const double r = std::max(0.3, t + qq(rng));
    const auto v = apx.eval(t, r);
    const double scale = std::abs(v.U) + 1e-4;
    const auto tp = apx.eval(t + h, r), tm = apx.eval(t - h, r);
    const auto rp = apx.eval(t, r + h), rm = apx.eval(t, r - h);
    CHECK(std::abs(v.Ut - (tp.U - tm.U) / (2 * h)) < 1e-6 * scale + 1e-9);
    CHECK(std::abs(v.Ur - (rp.U - rm.U) / (2 * h)) < 1e-6 * scale + 1e-9);
    CHECK(std::abs(v.Urr - (rp.Ur - rm.Ur) / (2 * h)) < 1e-5 * scale + 1e-8);
    CHECK(std::abs(v.Utr - (tp.Ur - tm.Ur) / (2 * h)) < 1e-5 * scale + 1e-8);
  }
}

TEST_CASE("seams of the glue are continuous") {
  const double eps = 0.2;
  const ApproxSolution apx(data1(), eps, tau0_1());
  for (double seam : {1.0 / eps, 2.0 / eps}) {
    for (double q : {-0.5, 0.2}) {
      const double h = 1e-4;
      const auto a = apx.eval(seam - h, seam + q), b = apx.eval(seam + h, seam + q);
      // a jump would survive the trapezoid correction
      CHECK(std::abs(b.U - a.U - h * (a.Ut + b.Ut)) < 1e-8);
      CHECK(std::abs(b.Ut - a.Ut - h * (a.Utt + b.Utt)) < 1e-7);
      CHECK(std::abs(a.Utt - b.Utt) < 1e-3);
    }
  }
}

TEST_CASE("residual vanishes for zero data") {
  const RadiationField zero({RadialProfile::zero(1.0), RadialProfile::zero(1.0)});
  const ApproxSolution apx(zero, 0.2, 1.0);
  for (double t : {1.0, 7.0, 20.0}) CHECK(sup_ja(apx, t) == 0.0);
}

TEST_CASE("radiation consistency at t = 2/eps") {
  for (double eps : {0.2, 0.1}) {
    const ApproxSolution apx(data1(), eps, tau0_1());
    const double t = 2.0 / eps;
    const ProfileEvaluator ev(data1(), eps * std::log1p(t));
    double worst = 0.0;
    for (double q = -1.0; q <= 1.0; q += 0.05) {
      worst = std::max(worst, std::abs(apx.eval(t, t + q).U / eps - ev.at(q).V));
    }
    CHECK(worst < eps);
  }
}

TEST_CASE("J_a time slope in the profile window") {
  const auto w = ja_window(data1(), 0.2, tau0_1());
  CHECK(w.probe.slope >= -3.3);
  CHECK(w.probe.slope <= -1.7);
  const auto h = ja_halving(data1(), 0.2, tau0_1());
  CHECK(h.factor >= 3.0);
  CHECK(h.factor <= 9.0);
}
