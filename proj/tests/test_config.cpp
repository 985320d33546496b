#include <doctest.h>

#include <cmath>
#include <string>

#include "qwblow/config.hpp"
#include "qwblow/errors.hpp"
#include "qwblow/lifespan.hpp"

using namespace qwblow;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text, "t.ini");
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal config takes the defaults") {
  const auto c = parse_config_text("[data]\nk = 5\n");
  CHECK(c.data.u0.k == 5);
  CHECK(c.data.u0.kind == ProfileSpec::Kind::poly_bump);
  CHECK(c.data.u1.kind == ProfileSpec::Kind::zero);
  CHECK(c.solver.dr == 2e-3);
  CHECK(c.solver.cfl == 0.8);
  CHECK(c.solver.c2_floor == 0.25);
  CHECK(c.solver.thresholds == std::vector<double>{50, 200, 800});
  CHECK(c.sweep.epsilons.size() == 4);
  CHECK(c.oracle.mu == 0.5);
  CHECK_FALSE(c.oracle.rho0.has_value());
}

TEST_CASE("dotted keys and comments") {
  const auto c = parse_config_text(
      "# comment\n"
      "data.k = 6   ; trailing\n"
      "data.u1.kind = poly_bump\n"
      "data.u1.k = 3\n"
      "[sweep]\n"
      "epsilons = 1/3, 0.25\n"
      "[oracle]\n"
      "rho0 = -0.3\n");
  CHECK(c.data.u0.k == 6);
  CHECK(c.data.u1.kind == ProfileSpec::Kind::poly_bump);
  CHECK(c.data.u1.k == 3);
  CHECK(c.sweep.epsilons[0] == doctest::Approx(1.0 / 3.0));
  CHECK(c.oracle.rho0.value() == -0.3);
}

TEST_CASE("invalid input is rejected with a location") {
  CHECK(error_of("[data]\nk = 2\n").find("k must be >= 3") != std::string::npos);
  CHECK(error_of("data.k=2\n").find(">= 3") != std::string::npos);
  CHECK(error_of("[data]\n\nbogus = 1\n").find("t.ini:3") != std::string::npos);
  CHECK(error_of("[data]\nk 4\n").find("t.ini:2") != std::string::npos);
  CHECK(error_of("[nope]\n").find("t.ini:1") != std::string::npos);
  CHECK(error_of("[solver]\ndr = abc\n").find("t.ini:2") != std::string::npos);
  CHECK_FALSE(error_of("[data]\nkind = sample_table\n").empty());
  CHECK_FALSE(error_of("[solver]\nthresholds = 200,50\n").empty());
  CHECK_FALSE(error_of("[oracle]\nmu = 1.5\n").empty());
  CHECK_THROWS_AS(parse_config("/nonexistent/run.ini"), InputError);
}

TEST_CASE("numbers") {
  CHECK(parse_number("1/3") == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
  CHECK(parse_number(" 0.25 ") == 0.25);
  CHECK(parse_number("2e-3") == 2e-3);
  CHECK_THROWS_AS(parse_number("1/0"), InputError);
  CHECK_THROWS_AS(parse_number("x"), InputError);
}

TEST_CASE("dump and reparse is the identity") {
  Config c;
  c.data.normalize_tau0 = true;
  c.data.u1 = {ProfileSpec::Kind::poly_bump, 3, 0.7, {}};
  c.solver.dr = 1.0 / 3000.0;
  c.solver.thresholds = {10.0, 1.0 / 7.0 + 100.0};
  c.sweep.epsilons = {1.0 / 3.0, 0.1};
  c.oracle.rho0 = -0.30176464645352567;
  const auto text = dump_config(c);
  const auto back = parse_config_text(text);
  CHECK(back == c);
  CHECK(dump_config(back) == text);
  CHECK(parse_config_text(dump_config(Config{})) == Config{});
}

TEST_CASE("normalisation makes tau0 one") {
  DataConfig d;
  d.normalize_tau0 = true;
  const auto b = build_data(d);
  CHECK(b.scale == doctest::Approx(0.934423452596914).epsilon(1e-12));
  CHECK(tau0(RadiationField(b.data)).tau0 == doctest::Approx(1.0).epsilon(1e-12));
  d.normalize_tau0 = false;
  CHECK(build_data(d).scale == 1.0);
}
