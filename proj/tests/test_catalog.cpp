#include <cmath>
#include <numbers>

#include "doctest.h"
#include "staticlab/catalog.hpp"
#include "staticlab/errors.hpp"

using namespace staticlab;

TEST_CASE("dSS horizons at m = 0.1") {
  const auto [r1, r2] = dss_horizons(0.1);
  CHECK(r1 == doctest::Approx(0.209148848441316582352).epsilon(1e-13));
  CHECK(r2 == doctest::Approx(0.878885066249972832343).epsilon(1e-13));
}

TEST_CASE("dSS horizon limits") {
  const double mc = 1 / (3 * std::sqrt(3.0));
  const auto [a, b] = dss_horizons(mc * (1 - 1e-10));
  CHECK(a == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-4));
  CHECK(b == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-4));
  const auto [c, d] = dss_horizons(1e-9);
  CHECK(c < 1e-8);
  CHECK(d == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("property: horizons are roots of r - r^3 - 2m") {
  for (double m = 0.01; m < 0.19; m += 0.02) {
    const auto [r1, r2] = dss_horizons(m);
    CHECK(std::abs(r1 - r1 * r1 * r1 - 2 * m) < 1e-13);
    CHECK(std::abs(r2 - r2 * r2 * r2 - 2 * m) < 1e-13);
    CHECK(r1 < r2);
  }
}

TEST_CASE("parameters out of range") {
  CHECK_THROWS_AS(dss_horizons(0.2), Error);
  CHECK_THROWS_AS(dss_horizons(0.0), Error);
  CHECK_THROWS_AS(build("dss", {{"m", 0.5}}), Error);
  CHECK_THROWS_AS(build("hemisphere", {{"n", 1}}), Error);
  CHECK_THROWS_AS(build("horowitz_myers", {{"r0", -1}}), Error);
  CHECK_THROWS_AS(build("nope"), Error);
  CHECK_THROWS_AS(build("hemisphere", {{"zz", 1}}), Error);
  try {
    build("dss", {{"m", 0.5}});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parameter);
  }
}

TEST_CASE("hemisphere expected forms") {
  const auto e = build("hemisphere");
  CHECK(e.model.potential(0.3) == doctest::Approx(std::cos(0.3)));
  CHECK(e.expected.s_of_r(0.3) == doctest::Approx(std::sin(0.3)));
  CHECK(e.expected.theta_of_s(1.0) == doctest::Approx(2.0));
  CHECK(e.model.boundary_locus.size() == 1);
}

TEST_CASE("dSS profiles") {
  const auto e = build("dss", {{"m", 0.1}});
  const double r = 0.5, w = 1 - r * r - 0.2 / r;
  CHECK(e.model.potential(r) == doctest::Approx(std::sqrt(w)));
  CHECK(e.model.metric.lapse()(r) == doctest::Approx(1 / std::sqrt(w)));
  CHECK(e.expected.theta_of_s(r) == doctest::Approx(2 / r));
}

TEST_CASE("Horowitz-Myers period") {
  const auto e = build("horowitz_myers", {{"n", 4}, {"r0", 1}});
  CHECK(e.metadata["phi_period"].get<double>() == doctest::Approx(std::numbers::pi));
  CHECK(e.conformal_end.has_value());
}

TEST_CASE("catalog names all build") {
  for (const auto& name : catalog_names()) {
    CAPTURE(name);
    CHECK_NOTHROW(build(name));
  }
  CHECK_FALSE(build("cosh_cylinder").static_claim);
  CHECK_FALSE(build("broken").static_claim);
}

TEST_CASE("break_potential raises V to a power") {
  const auto m = break_potential(build("hemisphere").model, 2.0);
  CHECK(m.potential(0.4) == doctest::Approx(std::cos(0.4) * std::cos(0.4)));
}
