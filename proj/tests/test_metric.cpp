#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "staticlab/catalog.hpp"
#include "staticlab/errors.hpp"
#include "staticlab/metric.hpp"

using namespace staticlab;

namespace {

RadialMetric round_sphere(int n) {
  return RadialMetric({0.0, std::numbers::pi}, Profile::constant(1.0),
                      {{FiberBlock::constant_curvature(n - 1, FiberKind::Sphere), Profile::expression("sin(r)")}});
}

RadialMetric hyperbolic_space(int n) {
  return RadialMetric({0.0, 10.0}, Profile::constant(1.0),
                      {{FiberBlock::constant_curvature(n - 1, FiberKind::Sphere), Profile::expression("sinh(r)")}});
}

}  // namespace

TEST_CASE("space forms have constant sectional curvature") {
  for (int n : {3, 4, 6}) {
    const auto sphere = curvature(round_sphere(n), 0.9);
    const auto hyp = curvature(hyperbolic_space(n), 1.7);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        CHECK(sphere.riemann(i, j, j, i) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(hyp.riemann(i, j, j, i) == doctest::Approx(-1.0).epsilon(1e-12));
      }
      CHECK(sphere.ricci(i, i) == doctest::Approx(n - 1.0).epsilon(1e-12));
    }
    CHECK(sphere.scalar() == doctest::Approx(n * (n - 1.0)).epsilon(1e-12));
    CHECK(hyp.scalar() == doctest::Approx(-n * (n - 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("hemisphere Christoffel symbol at pi/4") {
  const auto g = christoffel(round_sphere(3), std::numbers::pi / 4);
  // Frame-free chart: Γ^r_{θθ} = −b b' / a² with fiber normal coordinates.
  CHECK(g.christoffel(0, 1, 1) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(g.christoffel(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("radial lapse gives Γ^r_rr = a'/a") {
  const RadialMetric m({0.5, 2.0}, Profile::expression("1 + r^2"),
                       {{FiberBlock::constant_curvature(2, FiberKind::Sphere), Profile::expression("r")}});
  const double r = 1.2;
  CHECK(christoffel(m, r).christoffel(0, 0, 0) == doctest::Approx(2 * r / (1 + r * r)).epsilon(1e-12));
}

TEST_CASE("cylinder curvature: Ric(dt,dt) = 0, Ric(X,X) = 1, R = 2") {
  const RadialMetric m({0.0, 1.0}, Profile::constant(1.0),
                       {{FiberBlock::constant_curvature(2, FiberKind::Sphere), Profile::constant(1.0)}});
  const auto c = curvature(m, 0.4);
  CHECK(c.ricci(0, 0) == doctest::Approx(0.0));
  CHECK(c.ricci(1, 1) == doctest::Approx(1.0));
  CHECK(c.ricci(2, 2) == doctest::Approx(1.0));
  CHECK(c.scalar() == doctest::Approx(2.0));
}

TEST_CASE("Horowitz-Myers slice: R = -12 and diagonal Ricci") {
  const auto hm = build("horowitz_myers");
  const auto c = curvature(hm.model.metric, 1.5);
  const int n = hm.model.dim();
  REQUIRE(n == 4);
  CHECK(c.scalar() == doctest::Approx(-12.0).epsilon(1e-9));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) CHECK(std::abs(c.ricci(i, j)) < 1e-9);
    }
  }
  // The slice is not Einstein: the static relation carries the Hessian of V.
  CHECK(std::abs(c.ricci(0, 0) + 3.0) > 0.1);
  CHECK(std::isfinite(c.cross_path_discrepancy()));
  CHECK(c.cross_path_discrepancy() < 1e-6);
}

TEST_CASE("conformal metric of the hemisphere") {
  const auto hemi = build("hemisphere").model;
  const RadialMetric gt = conformal_metric(hemi.metric, hemi.potential);
  const auto d = warped_data(gt, 0.7);
  CHECK(d.a.value() * d.a.value() == doctest::Approx(1.7094497158631171486).epsilon(1e-13));
  CHECK(d.b[0].value() * d.b[0].value() == doctest::Approx(0.70944971586311714868).epsilon(1e-13));
  // g/V² over the hemisphere is hyperbolic space.
  const auto c = curvature(gt, 0.7);
  CHECK(c.riemann(0, 1, 1, 0) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(c.riemann(1, 2, 2, 1) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("conformal metric of de Sitter-Schwarzschild") {
  const auto dss = build("dss", {{"m", 0.1}}).model;
  const RadialMetric gt = conformal_metric(dss.metric, dss.potential);
  const double a = warped_data(gt, 0.5).a.value();
  CHECK(a * a == doctest::Approx(8.16326530612244897959).epsilon(1e-12));
}

TEST_CASE("conformal metric rejects a vanishing potential inside the domain") {
  const auto hemi = build("hemisphere").model;
  CHECK_THROWS_AS(conformal_metric(hemi.metric, Profile::expression("cos(2*r)")), Error);
}

TEST_CASE("property: closed-form and Christoffel-difference curvature agree on random warps") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 0.6);
  for (int trial = 0; trial < 20; ++trial) {
    const double c1 = u(rng), c2 = u(rng), c3 = u(rng);
    const std::map<std::string, double> p{{"c1", c1}, {"c2", c2}, {"c3", c3}};
    const RadialMetric m({0.5, 2.0}, Profile::expression("1 + c1*r^2", p),
                         {{FiberBlock::constant_curvature(1, FiberKind::Flat), Profile::expression("exp(c2*r)", p)},
                          {FiberBlock::constant_curvature(2, FiberKind::Sphere), Profile::expression("r + c3*r^3", p)}});
    const double r = 0.7 + 0.05 * (trial % 10);
    const auto closed = curvature(m, r, {false});
    const auto fd = curvature_from_christoffel(m, r);
    for (int i = 0; i < m.dim(); ++i) {
      for (int j = 0; j < m.dim(); ++j) {
        CHECK(std::abs(closed.ricci(i, j) - fd.ricci(i, j)) < 1e-6 * std::max(1.0, std::abs(closed.ricci(i, j))));
      }
    }
    CHECK(contracted_bianchi_defect(m, r) < 1e-6);
  }
}

TEST_CASE("property: scalar curvature is the Ricci trace") {
  const auto dss = build("dss").model;
  for (double r : {0.3, 0.5, 0.8}) {
    const auto c = curvature(dss.metric, r);
    double tr = 0.0;
    for (int i = 0; i < dss.dim(); ++i) tr += c.ricci(i, i);
    CHECK(tr == doctest::Approx(c.scalar()).epsilon(1e-12));
  }
}

TEST_CASE("Einstein fibers expose Ricci only") {
  const RadialMetric m({0.5, 2.0}, Profile::constant(1.0),
                       {{FiberBlock::einstein(4, 3.0), Profile::expression("r")}});
  const auto c = curvature(m, 1.0);
  CHECK_FALSE(c.has_riemann());
  CHECK_THROWS_AS(c.riemann(1, 2, 2, 1), Error);
  CHECK_THROWS_AS(FiberBlock::einstein(4, 3.0).sectional(), Error);
}

TEST_CASE("interior evaluation only") {
  CHECK_THROWS_AS(round_sphere(3).require_interior(0.0), Error);
  CHECK_NOTHROW(round_sphere(3).require_interior(1.0));
}
