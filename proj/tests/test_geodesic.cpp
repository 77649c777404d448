#include <cmath>
#include <numbers>

#include "doctest.h"
#include "staticlab/catalog.hpp"
#include "staticlab/errors.hpp"
#include "staticlab/geodesic.hpp"

using namespace staticlab;

TEST_CASE("hemisphere radial geodesic: sin r(t) = tanh(t + atanh(sin r0)), s = sin r - sin r0") {
  const auto m = build("hemisphere").model;
  const double r0 = 0.2;
  const auto tr = integrate_geodesic(m, make_start(m, r0, 0.0), 100.0);
  REQUIRE(tr.states.size() > 10);
  CHECK(tr.stop == GeodesicStop::BoundaryHit);
  double err_r = 0.0, err_s = 0.0;
  for (const auto& st : tr.states) {
    err_r = std::max(err_r, std::abs(std::sin(st.r) - std::tanh(st.t + std::atanh(std::sin(r0)))));
    err_s = std::max(err_s, std::abs(st.s - (std::sin(st.r) - std::sin(r0))));
  }
  CHECK(err_r < 1e-8);
  CHECK(err_s < 1e-8);
}

TEST_CASE("cylinder radial geodesic: s = (cos(k r0) - cos(k r)) / k") {
  const auto m = build("cylinder").model;
  const double k = std::sqrt(3.0), r0 = 0.3;
  const auto tr = integrate_geodesic(m, make_start(m, r0, 0.0), 3.0);
  double err = 0.0;
  for (const auto& st : tr.states) err = std::max(err, std::abs(st.s - (std::cos(k * r0) - std::cos(k * st.r)) / k));
  CHECK(err < 1e-8);
}

TEST_CASE("property: non-radial geodesics keep unit speed and angular momentum") {
  const auto m = build("dss", {{"m", 0.1}}).model;
  for (double heading : {0.3, 1.0, 1.4, 2.5}) {
    CAPTURE(heading);
    const auto tr = integrate_geodesic(m, make_start(m, 0.5, heading), 3.0);
    REQUIRE(tr.states.size() > 5);
    CHECK(tr.max_speed_drift() < 1e-9);
    const auto momentum = [&](const GeodesicState& st) { return st.r / m.potential(st.r) * st.u[2]; };
    const double l0 = momentum(tr.states.front());
    for (const auto& st : tr.states) CHECK(momentum(st) == doctest::Approx(l0).epsilon(1e-8));
  }
}

TEST_CASE("property: s is non-decreasing and ds/dt = V^2") {
  const auto m = build("hemisphere").model;
  const auto tr = integrate_geodesic(m, make_start(m, 0.4, 0.7), 2.0);
  for (std::size_t i = 1; i < tr.states.size(); ++i) {
    CHECK(tr.states[i].s >= tr.states[i - 1].s);
    const double dt = tr.states[i].t - tr.states[i - 1].t;
    const double vm = 0.5 * (tr.states[i].potential + tr.states[i - 1].potential);
    if (dt < 1e-3) CHECK((tr.states[i].s - tr.states[i - 1].s) / dt == doctest::Approx(vm * vm).epsilon(1e-4));
  }
}

TEST_CASE("null lift of radial and non-radial traces") {
  for (const char* name : {"hemisphere", "cylinder", "dss"}) {
    CAPTURE(name);
    const auto e = build(name);
    const double r = 0.5 * (e.model.grid_domain().lo + e.model.grid_domain().hi);
    for (double heading : {0.0, 0.8}) {
      GeodesicOptions o;
      o.rtol = 1e-12;
      o.atol = 1e-14;
      o.v_floor = 3e-2;
      const auto tr = integrate_geodesic(e.model, make_start(e.model, r, heading), 3.0, o);
      const auto lift = null_lift_check(e.model, tr);
      CHECK(lift.rows > 0);
      CHECK(lift.max_null < 1e-7);
      CHECK(lift.max_geodesic < 1e-7);
    }
  }
}

TEST_CASE("batch integration is independent of execution mode") {
  const auto m = build("hemisphere").model;
  std::vector<GeodesicState> starts;
  for (int i = 0; i < 12; ++i) starts.push_back(make_start(m, 0.1 + 0.1 * i, 0.25 * i));
  const auto a = integrate_batch(m, starts, 2.0, {}, Execution::Serial);
  const auto b = integrate_batch(m, starts, 2.0, {}, Execution::Parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].states.size() == b[i].states.size());
    CHECK(a[i].states.back().r == b[i].states.back().r);
    CHECK(a[i].states.back().s == b[i].states.back().s);
  }
}

TEST_CASE("s diverges toward a conformal boundary and stays finite toward V = 0") {
  const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  const auto hyp = s_total(build("hyperbolic").model, 0.5, 1, eps);
  CHECK(hyp.conformal_end);
  CHECK(hyp.divergent);
  CHECK(hyp.slope == doctest::Approx(-1.0).epsilon(0.1));
  const auto hemi = s_total(build("hemisphere").model, 0.0, 1, eps);
  CHECK_FALSE(hemi.divergent);
  CHECK(hemi.converged);
  CHECK(hemi.s_limit == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("start outside the domain is rejected") {
  const auto m = build("hemisphere").model;
  CHECK_THROWS_AS(integrate_geodesic(m, make_start(m, 2.0, 0.0), 1.0), Error);
  // The pole is allowed only for a radial start heading inward.
  CHECK_NOTHROW(integrate_geodesic(m, make_start(m, 0.0, 0.0), 1.0));
  CHECK_THROWS_AS(integrate_geodesic(m, make_start(m, 0.0, 0.5), 1.0), Error);
  GeodesicState slow = make_start(m, 0.5, 0.0);
  slow.u[0] = 0.5;
  CHECK_THROWS_AS(integrate_geodesic(m, slow, 1.0), Error);
}
