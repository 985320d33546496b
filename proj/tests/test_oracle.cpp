#include <doctest.h>

#include <cmath>

#include "qwblow/blowup_oracle.hpp"
#include "qwblow/checks.hpp"
#include "qwblow/errors.hpp"

using namespace qwblow;

namespace {

RiccatiInstance constant(double T, double a0, double a1, double a2, double w0) {
  RiccatiInstance r;
  r.T = T;
  r.a0 = [a0](double) { return a0; };
  r.a1 = [a1](double) { return a1; };
  r.a2 = [a2](double) { return a2; };
  r.w0 = w0;
  return r;
}

}  // namespace

TEST_CASE("pure quadratic blows up at 1/w0") {
  const auto inst = constant(2.0, 1.0, 0.0, 0.0, 1.0);
  const auto b = riccati_bound(inst);
  CHECK(b.K == 0.0);
  CHECK(b.lhs == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.rhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.applicable);
  CHECK(b.certified);
  const auto run = riccati_integrate(inst);
  CHECK(run.blew_up);
  CHECK(std::abs(run.t_blow - 1.0) < 1e-6);
  CHECK(run.t_lo <= 1.0);
  CHECK(run.t_hi >= 1.0 - 1e-9);
}

TEST_CASE("constant forcing") {
  const auto inst = constant(1.0, 1.0, 0.0, 0.5, 2.0);
  const auto b = riccati_bound(inst);
  CHECK(b.K == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.rhs == doctest::Approx(1.0 / 1.5).epsilon(1e-12));
  CHECK(b.certified);
  const auto run = riccati_integrate(inst);
  CHECK(run.blew_up);
  CHECK(run.t_blow < 1.0);
  // w' = w^2 + 1/2 from 2: t* = sqrt(2) (pi/2 - atan(2 sqrt(2)))
  CHECK(run.t_blow == doctest::Approx(std::sqrt(2.0) * (M_PI / 2 - std::atan(2 * std::sqrt(2.0)))).epsilon(1e-6));
}

TEST_CASE("linear equations are never certified") {
  for (double w0 : {0.5, 5.0, 1e3}) {
    const auto b = riccati_bound(constant(10.0, 0.0, 0.3, 0.1, w0));
    CHECK(b.lhs == 0.0);
    CHECK_FALSE(b.certified);
  }
}

TEST_CASE("attracted solution survives") {
  const auto run = riccati_integrate(constant(20.0, 1.0, 0.0, -1.0, 0.5));
  CHECK_FALSE(run.blew_up);
  CHECK(run.w_end == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("w0 below K is not applicable") {
  const auto b = riccati_bound(constant(1.0, 1.0, 0.0, 3.0, 2.0));
  CHECK_FALSE(b.applicable);
  CHECK_FALSE(b.certified);
  CHECK(std::isinf(b.rhs));
}

TEST_CASE("negative a0 violates the hypothesis") {
  CHECK_THROWS_AS(riccati_bound(constant(1.0, -0.1, 0.0, 0.0, 1.0)), InputError);
}

TEST_CASE("sampled coefficients integrate exactly") {
  RiccatiInstance r;
  r.T = 2.0;
  const PiecewiseLinear a0({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
  const PiecewiseLinear a1({0.0, 2.0}, {-1.0, 1.0});
  const PiecewiseLinear a2({0.0, 2.0}, {0.0, 0.0});
  r.a0 = a0;
  r.a1 = a1;
  r.a2 = a2;
  r.knots = {0.0, 1.0, 2.0};
  r.w0 = 3.0;
  const auto b = riccati_bound(r);
  // int a0 = 2, int |a1| = 1
  CHECK(b.lhs == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(b.K == 0.0);
}

TEST_CASE("enlarging T keeps a certificate") {
  for (double T : {1.0, 1.5, 3.0, 6.0}) {
    RiccatiInstance r;
    r.T = T;
    r.a0 = [](double t) { return 0.5 + 0.2 * t; };
    r.a1 = [](double t) { return 0.4 * std::sin(5 * t) * std::exp(-3 * t); };
    r.a2 = [](double t) { return -0.3 * std::exp(-3 * t); };
    r.w0 = 4.0;
    const bool first = riccati_bound(r).certified;
    r.T = 2 * T;
    if (first) CHECK(riccati_bound(r).certified);
  }
}

TEST_CASE("randomised soundness") {
  const auto b = riccati_property_batch(500, 12345);
  CHECK(b.instances == 500);
  CHECK(b.certified > 50);
  CHECK(b.counterexamples == 0);
  CHECK(b.worst_ratio <= 1.0 + 1e-9);
}

TEST_CASE("certificate from path data") {
  const RadiationField field(reference_data());
  CertifyOptions o;
  o.epsilon = 0.5;
  o.tau0 = 0.9;
  o.rho0 = -0.3;
  std::vector<PathSample> path;
  for (int k = 0; k <= 40; ++k) {
    PathSample p;
    p.t = 0.5 * k;
    p.f.r = p.t - 0.3;
    path.push_back(p);
  }
  // w1 identically zero: the seed never beats K
  const auto cert = certify_from_run(path, field, o);
  CHECK_FALSE(cert.certified);
  CHECK(cert.w_hat == 0.0);
  CHECK(cert.t_eps == doctest::Approx(std::exp(0.5 * 0.9 / 0.5) - 1.0));
  path.resize(3);
  CHECK_THROWS_AS(certify_from_run(path, field, o), NumericalError);
}
