#include <cmath>
#include <numbers>

#include "doctest.h"
#include "staticlab/catalog.hpp"
#include "staticlab/errors.hpp"
#include "staticlab/riccati.hpp"

using namespace staticlab;

namespace {

RiccatiTrace pole_trace(const StaticModel& m, const RiccatiOptions& o = {}) {
  const GeodesicState st = make_start(m, 0.0, 0.0);
  const auto tr = integrate_geodesic(m, st, 100.0, o.geodesic);
  return evolve_riccati(m, tr, init_shape_operator(m, st, o.rho0, o.geodesic), o);
}

}  // namespace

TEST_CASE("hemisphere from the pole: theta = 2/s and zero slack") {
  const auto m = build("hemisphere").model;
  const auto rt = pole_trace(m);
  REQUIRE(rt.rows.size() > 20);
  for (const auto& row : rt.rows) {
    CHECK(row.theta * row.s == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(std::abs(row.slack) < 1e-6 * std::max(1.0, row.theta * row.theta / 2));
  }
  CHECK(equality_case(rt, 3, 1e-6));
  const auto comp = check_comparison(rt, 3);
  CHECK(comp.pass);
  CHECK(comp.max_excess < 1e-7);
}

TEST_CASE("point initialization: deviation from Id/rho0 halves with rho0") {
  // g/V^2 over the hemisphere is hyperbolic: geodesic spheres have A = coth(rho) Id.
  const auto m = build("hemisphere").model;
  const GeodesicState st = make_start(m, 0.0, 0.0);
  double prev_dev = 0.0, prev_err = 0.0;
  for (double rho : {4e-2, 2e-2, 1e-2}) {
    const auto init = init_shape_operator(m, st, rho);
    const Matrix dev = init.a_tilde - (1.0 / rho) * Matrix::identity(2);
    const Matrix err = init.a_tilde - (1.0 / std::tanh(rho)) * Matrix::identity(2);
    CHECK(dev.frobenius_norm() == doctest::Approx(std::sqrt(2.0) * rho / 3).epsilon(1e-6));
    if (prev_dev > 0) {
      CHECK(dev.frobenius_norm() / prev_dev == doctest::Approx(0.5).epsilon(1e-3));
      CHECK(err.frobenius_norm() < prev_err / 7);
    }
    prev_dev = dev.frobenius_norm();
    prev_err = err.frobenius_norm();
  }
}

TEST_CASE("cylinder level slices: theta = 0") {
  const auto m = build("cylinder").model;
  const RiccatiOptions o;
  const auto tr = integrate_geodesic(m, make_start(m, 0.3, 0.0), 100.0, o.geodesic);
  const auto rt = evolve_riccati(m, tr, init_level_set(m, 0.3, 1), o);
  REQUIRE(rt.rows.size() > 10);
  for (const auto& row : rt.rows) {
    CHECK(std::abs(row.theta) < 1e-9);
    CHECK(std::abs(row.null_expansion) < 1e-9);
  }
  CHECK(check_comparison(rt, 3).pass);
  CHECK(level_set_theta(m, 0.7, 1) == doctest::Approx(0.0));
}

TEST_CASE("dSS radial from r1: theta = 2/r with s = r") {
  const auto e = build("dss", {{"m", 0.1}});
  const double r0 = dss_horizons(0.1).first + 1e-3;
  const RiccatiOptions o;
  const auto tr = integrate_geodesic(e.model, make_start(e.model, r0, 0.0), 100.0, o.geodesic);
  const auto rt = evolve_riccati(e.model, tr, init_level_set(e.model, r0, 1, r0), o);
  REQUIRE(rt.rows.size() > 10);
  for (const auto& row : rt.rows) {
    CHECK(row.s == doctest::Approx(row.r).epsilon(1e-8));
    CHECK(row.theta == doctest::Approx(2.0 / row.r).epsilon(1e-7));
  }
  CHECK(level_set_theta(e.model, 0.5, 1) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("non-radial dSS trace satisfies the inequality with positive slack") {
  const auto m = build("dss", {{"m", 0.1}}).model;
  const RiccatiOptions o;
  const GeodesicState st = make_start(m, 0.5, 1.0);
  const auto tr = integrate_geodesic(m, st, 3.0, o.geodesic);
  const auto rt = evolve_riccati(m, tr, init_shape_operator(m, st, o.rho0, o.geodesic), o);
  const auto ineq = check_inequality(rt, 3);
  CHECK(ineq.pass);
  CHECK(ineq.min_slack >= -1e-6);
  double max_slack = 0.0;
  for (const auto& row : rt.rows) max_slack = std::max(max_slack, row.slack);
  CHECK(max_slack > 1e-4);
  CHECK(check_comparison(rt, 3).pass);
  CHECK(rt.max_asymmetry < 1e-10);
  CHECK(rt.max_frame_drift < 1e-9);
}

TEST_CASE("Raychaudhuri: B matches theta on the hemisphere") {
  const auto m = build("hemisphere").model;
  const RiccatiOptions o;
  const GeodesicState st = make_start(m, 0.3, 0.6);
  const auto tr = integrate_geodesic(m, st, 3.0, o.geodesic);
  const auto rt = evolve_riccati(m, tr, init_shape_operator(m, st, o.rho0, o.geodesic), o);
  const auto ray = raychaudhuri_check(m, tr, rt);
  CHECK(ray.pass);
  CHECK(ray.max_mismatch < 1e-6);
  CHECK(std::abs(ray.min_null_energy) < 1e-8);
  CHECK(std::abs(ray.max_null_energy) < 1e-8);
}

TEST_CASE("flat space with V = 1: B = theta = (n-1)/s") {
  const RadialMetric flat({0.0, 10.0}, Profile::constant(1.0),
                          {{FiberBlock::constant_curvature(2, FiberKind::Sphere), Profile::expression("r")}});
  const StaticModel m{"flat", flat, Profile::constant(1.0), 0, {}, Interval{0.0, 5.0}};
  const RiccatiOptions o;
  const GeodesicState st = make_start(m, 1.0, 0.5);
  const auto tr = integrate_geodesic(m, st, 3.0, o.geodesic);
  const auto rt = evolve_riccati(m, tr, init_shape_operator(m, st, o.rho0, o.geodesic), o);
  for (const auto& row : rt.rows) {
    CHECK(row.theta * row.s == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(row.null_expansion * row.s == doctest::Approx(2.0).epsilon(1e-7));
  }
}

TEST_CASE("negative control violates the inequality") {
  SuiteOptions so;
  so.count = 20;
  const auto broken = inequality_suite(build("broken").model, so);
  CHECK(broken.min_slack < -1e-2);
  CHECK_FALSE(broken.inequality_pass);
}

TEST_CASE("property: randomized suites pass and do not depend on execution mode") {
  SuiteOptions so;
  so.count = 30;
  const auto m = build("hemisphere").model;
  const auto par = inequality_suite(m, so, Execution::Parallel);
  const auto ser = inequality_suite(m, so, Execution::Serial);
  CHECK(par.inequality_pass);
  CHECK(par.comparison_pass);
  CHECK(par.raychaudhuri_pass);
  CHECK(par.min_slack >= -1e-6);
  CHECK(par.to_json().dump() == ser.to_json().dump());
}

TEST_CASE("init must lie on the trace") {
  const auto m = build("hemisphere").model;
  const auto tr = integrate_geodesic(m, make_start(m, 0.3, 0.0), 1.0);
  CHECK_THROWS_AS(evolve_riccati(m, tr, init_level_set(m, 0.9, 1)), Error);
}

TEST_CASE("CSV has one row per trace sample") {
  const auto rt = pole_trace(build("hemisphere").model);
  const std::string csv = rt.to_csv();
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == rt.rows.size() + 1);
}
