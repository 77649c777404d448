#include <cmath>
#include <random>

#include "doctest.h"
#include "staticlab/errors.hpp"
#include "staticlab/warped.hpp"

using namespace staticlab;

TEST_CASE("symbolic oracle values") {
  // tools/derive_warped_oracle.py
  const auto a = ode_rhs({0.0, 1.3, 0.2, 0.7, -0.1}, 4);
  CHECK(a.f == doctest::Approx(2339.0 / 9555.0).epsilon(1e-13));
  CHECK(a.v == doctest::Approx(-9941.0 / 35490.0).epsilon(1e-13));
  const auto b = ode_rhs({0.0, 2.0, 0.0, 1.5, 0.0}, 5);
  CHECK(b.f == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(b.v == doctest::Approx(-0.5625).epsilon(1e-14));
}

TEST_CASE("critical points: f'' = (n-3)/((n-1) f)") {
  for (int n : {3, 4, 5, 7}) {
    const double f = 1.3;
    CHECK(ode_rhs({0.0, f, 0.0, 0.7, 0.0}, n).f == doctest::Approx((n - 3.0) / ((n - 1.0) * f)).epsilon(1e-14));
  }
}

TEST_CASE("n = 3 constants are a fixed point") {
  const auto a = ode_rhs({0.0, 1.3, 0.0, 0.7, 0.0}, 3);
  CHECK(std::abs(a.f) < 1e-15);
  CHECK(std::abs(a.v) < 1e-15);
  const auto t = integrate_warped({0.0, 1.3, 0.0, 0.7, 0.0}, 3, 2.0);
  CHECK(t.stop == WarpedStop::SpanEnd);
  for (const auto& st : t.states) {
    CHECK(std::abs(st.f - 1.3) < 1e-10);
    CHECK(std::abs(st.v - 0.7) < 1e-10);
  }
  const auto rep = verify_construction(t);
  CHECK(rep.reduced.sup_norm < 1e-10);
  CHECK(rep.full.sup_norm < 1e-10);
}

TEST_CASE("property: substitution residual on random states") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(0.1, 3.0), slope(-2.0, 2.0);
  for (int n : {3, 4, 5, 7}) {
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const WarpedState x{0.0, pos(rng), slope(rng), pos(rng), slope(rng)};
      const auto r = reduced_equations(x, ode_rhs(x, n), n);
      worst = std::max({worst, std::abs(r[0]), std::abs(r[1])});
    }
    CAPTURE(n);
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("singular system is rejected") {
  CHECK_THROWS_AS(ode_rhs({0.0, 1.0, 0.1, 0.0, 0.2}, 4), Error);
  CHECK_THROWS_AS(ode_rhs({0.0, 1.0, 0.1, 1.0, 0.2}, 2), Error);
}

TEST_CASE("generic trajectories verify as static metrics") {
  for (int n : {4, 5, 7}) {
    CAPTURE(n);
    const auto t = integrate_warped({0.0, 1.0, 0.1, 1.0, -0.3}, n, 4.0);
    REQUIRE(t.states.size() > 20);
    const auto rep = verify_construction(t);
    CHECK(rep.pass(1e-7));
    CHECK(rep.window.length() > 0.5);
  }
}

TEST_CASE("corrupted trajectory fails verification") {
  auto t = integrate_warped({0.0, 1.0, 0.3, 1.0, 0.2}, 4, 3.0);
  CHECK(verify_construction(t).pass());
  for (auto& st : t.states) st.f += 1e-3;
  CheckOptions o;
  o.cross_check = false;
  const auto bad = verify_construction(t, 200, o);
  CHECK(bad.full.sup_norm > 1e-4);
  CHECK_FALSE(bad.pass());
}

TEST_CASE("potential event is located to the floor") {
  WarpedOptions o;
  o.floor = 1e-3;
  const auto fz = fuzz_warped(4, 1000, 7, 5.0, o);
  CHECK(fz.nan_states == 0);
  CHECK(fz.potential_zero > 0);
  CHECK(std::abs(fz.max_event_potential - 1e-3) < 1e-10);
}

TEST_CASE("fuzzed trajectories never produce NaN") {
  const auto fz = fuzz_warped(5, 1000, 11);
  CHECK(fz.trajectories == 1000);
  CHECK(fz.nan_states == 0);
  CHECK(fz.potential_zero + fz.warp_zero + fz.blowup + fz.span_end == 1000);
}

TEST_CASE("property: fuzz is independent of execution mode") {
  const auto a = fuzz_warped(4, 200, 5, 5.0, {}, Execution::Serial);
  const auto b = fuzz_warped(4, 200, 5, 5.0, {}, Execution::Parallel);
  CHECK(a.to_json().dump() == b.to_json().dump());
}

TEST_CASE("span errors") {
  CHECK_THROWS_AS(integrate_warped({0.0, 1.0, 0.0, 1e-13, 0.0}, 4, 1.0), Error);
  CHECK_THROWS_AS(integrate_warped({0.0, 1.0, 0.0, 1.0, 0.0}, 4, 0.0), Error);
}

TEST_CASE("full model reproduces the trajectory") {
  const auto t = integrate_warped({0.0, 1.0, 0.3, 1.0, 0.2}, 4, 1.0);
  const auto m = full_model(t, {0.1, 0.9});
  CHECK(m.dim() == 4);
  CHECK(m.potential(0.5) == doctest::Approx(trajectory_profiles(t).second(0.5)).epsilon(1e-14));
  const auto log = t.boundary_log();
  CHECK(log["stop"] == to_string(t.stop));
}
