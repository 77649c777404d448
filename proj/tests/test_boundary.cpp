#include <cmath>
#include <numbers>

#include "doctest.h"
#include "staticlab/boundary.hpp"
#include "staticlab/catalog.hpp"
#include "staticlab/errors.hpp"
#include "staticlab/grid.hpp"

using namespace staticlab;

namespace {

double central(const std::function<double(double)>& f, double x, double h = 1e-4) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

}  // namespace

TEST_CASE("hyperbolic end distance: u = pi/2 - gd(r), Lu = -(n-1)/sinh r") {
  const auto m = build("hyperbolic").model;
  const auto u = end_distance(m, INFINITY);
  CHECK(u.kind == RadialKind::EndDistance);
  for (double r : {0.5, 1.0, 3.0}) CHECK(u.phi(r) == doctest::Approx(std::numbers::pi / 2 - 2 * std::atan(std::tanh(r / 2))).epsilon(1e-12));
  const auto g = chebyshev_grid(m.grid_domain(), 50);
  const auto lu = L_apply(m, u, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(lu[i] == doctest::Approx(-2.0 / std::sinh(g[i])).epsilon(1e-9));
    CHECK(lu[i] <= 0.0);
  }
  CHECK(gradient_defect(m, u, g) < 1e-12);
}

TEST_CASE("Horowitz-Myers: L u against a divergence-form oracle") {
  // L u = V^-2 [div~ grad~ u + (n-1) <d log V, du>~], with u' = -a~ and
  // div~ grad~ u = -(1/rho) (rho/a~)' for the g~-volume density rho.
  const auto m = build("horowitz_myers").model;
  const auto u = end_distance(m, INFINITY);
  const auto at = [](double r) { return 1.0 / (r * r * std::sqrt(1 - std::pow(r, -4))); };
  const auto rho_over_at = [](double r) { return std::sqrt(1 - std::pow(r, -4)); };
  const auto g = chebyshev_grid({1.2, 5.0}, 30);
  const auto lu = L_apply(m, u, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g[i], v = r;
    const double rho = at(r) * rho_over_at(r);
    const double expected = (-central(rho_over_at, r) / rho - 3.0 / (v * at(r))) / (v * v);
    CHECK(lu[i] == doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("hemisphere: L of the pole distance equals theta = 2/sin r") {
  const auto m = build("hemisphere").model;
  const auto phi = conformal_distance(m, 0.0, 1);
  CHECK(phi.kind == RadialKind::PointDistance);
  const auto g = chebyshev_grid({0.0, 1.5}, 20);
  const auto l = L_apply(m, phi, g);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(l[i] == doctest::Approx(2.0 / std::sin(g[i])).epsilon(1e-9));
}

TEST_CASE("two paths to theta agree") {
  const auto m = build("hemisphere").model;
  const RiccatiOptions o;
  const GeodesicState st = make_start(m, 0.0, 0.0);
  const auto tr = integrate_geodesic(m, st, 100.0, o.geodesic);
  const auto rt = evolve_riccati(m, tr, init_shape_operator(m, st, o.rho0, o.geodesic), o);
  const auto rep = theta_consistency(m, conformal_distance(m, 0.0, 1), rt);
  CHECK(rep.rows > 10);
  CHECK(rep.pass(1e-6));
}

TEST_CASE("constant function: L = 0") {
  const auto m = build("hyperbolic").model;
  const auto c = custom_function(Profile::constant(2.0), {0.0, INFINITY});
  for (double v : L_apply(m, c, chebyshev_grid(m.grid_domain(), 20))) CHECK(v == 0.0);
}

TEST_CASE("affine length and level radii") {
  const auto hemi = build("hemisphere").model;
  CHECK(affine_length(hemi, 0.0, std::numbers::pi / 2) == doctest::Approx(1.0).epsilon(1e-12));
  const auto hyp = build("hyperbolic").model;
  CHECK(affine_length(hyp, 0.0, 2.0) == doctest::Approx(std::sinh(2.0)).epsilon(1e-12));
  CHECK(level_radius_toward(hyp, 0.5, INFINITY, 10.0) == doctest::Approx(std::acosh(10.0)).epsilon(1e-12));
}

TEST_CASE("superharmonicity toward conformal boundaries") {
  for (const char* name : {"hyperbolic", "horowitz_myers"}) {
    CAPTURE(name);
    const auto e = build(name);
    const auto rep = superharmonicity_check(e.model, INFINITY, chebyshev_grid(e.model.grid_domain(), 100));
    CHECK(rep.pass());
    CHECK(rep.min_neg_lu >= -1e-6);
    CHECK(rep.slope == doctest::Approx(-1.0).epsilon(0.1));
    CHECK(rep.s_of_eps.size() == 5);
    for (std::size_t i = 1; i < rep.s_of_eps.size(); ++i) CHECK(rep.s_of_eps[i] > rep.s_of_eps[i - 1]);
  }
}

TEST_CASE("hyperbolic: Lu recedes to 0 away from the centre") {
  const auto m = build("hyperbolic").model;
  const auto lu = L_apply(m, end_distance(m, INFINITY), {1.0, 2.0, 4.0, 8.0});
  for (std::size_t i = 1; i < lu.size(); ++i) CHECK(std::abs(lu[i]) < std::abs(lu[i - 1]));
  CHECK(std::abs(lu.back()) < 1e-2);
}

TEST_CASE("positively curved models are not compactifiable") {
  for (const char* name : {"hemisphere", "cylinder", "dss"}) {
    CAPTURE(name);
    const auto m = build(name).model;
    const double end = m.metric.domain().hi;
    CHECK_THROWS_AS(require_compactifiable(m, end), Error);
    try {
      boundary_suite(m, end);
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::Precondition);
    }
  }
}

TEST_CASE("level-set convexity") {
  const auto hemi = build("hemisphere").model;
  const auto h = boundary_convexity(hemi, std::numbers::pi / 2);
  CHECK(h.kind == "potential_zero");
  CHECK(h.min_eigenvalue > 0.0);
  // {cos r = eps}: V A - dV/dnu = eps cot r + sin r.
  for (const auto& lv : h.levels) {
    const double r = std::acos(lv.epsilon);
    CHECK(lv.min_eigenvalue == doctest::Approx(lv.epsilon / std::tan(r) + std::sin(r)).epsilon(1e-8));
  }
  const auto cyl = build("cylinder").model;
  const auto c = boundary_convexity(cyl, cyl.metric.domain().hi);
  CHECK(c.min_eigenvalue > 0.0);
  const auto hyp = build("hyperbolic").model;
  const auto y = boundary_convexity(hyp, INFINITY);
  CHECK(y.kind == "conformal");
  CHECK(y.pass());
}

TEST_CASE("suite JSON carries the schema and summary keys") {
  const auto m = build("hyperbolic").model;
  const auto j = boundary_suite(m, INFINITY, 64).to_json();
  CHECK(j.contains("schema"));
  const std::string text = j.dump();
  CHECK(text.find("min_neg_Lu") != std::string::npos);
  CHECK(text.find("slope_s_of_eps") != std::string::npos);
  CHECK(text.find("convexity_min_eig") != std::string::npos);
}

TEST_CASE("property: L is linear in phi") {
  const auto m = build("horowitz_myers").model;
  const auto g = chebyshev_grid({1.2, 4.0}, 25);
  const auto u = end_distance(m, INFINITY);
  const auto a = L_apply(m, custom_function(u.phi.scaled(3.0), u.domain), g);
  const auto b = L_apply(m, custom_function(u.phi.shifted(7.0), u.domain), g);
  const auto l = L_apply(m, u, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(a[i] == doctest::Approx(3.0 * l[i]).epsilon(1e-12));
    CHECK(b[i] == doctest::Approx(l[i]).epsilon(1e-12));
  }
}
