#include <cmath>
#include <numbers>

#include "doctest.h"
#include "staticlab/catalog.hpp"
#include "staticlab/errors.hpp"
#include "staticlab/grid.hpp"
#include "staticlab/static_check.hpp"

using namespace staticlab;

namespace {

std::vector<double> grid_for(const StaticModel& m, int count = 1000) { return chebyshev_grid(m.grid_domain(), count); }

}  // namespace

TEST_CASE("static catalog models have vanishing static tensor") {
  for (const char* name : {"hemisphere", "cylinder", "dss", "hyperbolic", "horowitz_myers"}) {
    CAPTURE(name);
    const auto e = build(name);
    const auto rep = static_residual(e.model, grid_for(e.model));
    CHECK(rep.sup_norm < 1e-8);
    CHECK(rep.per_point.size() == 1000);
  }
}

TEST_CASE("static tensor of the hemisphere is zero at a point") {
  const auto m = build("hemisphere").model;
  const Matrix s = static_tensor(m, 0.6);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(std::abs(s(i, j)) < 1e-10);
  }
}

TEST_CASE("trace system: hyperbolic Delta V = nV, cylinder Delta V + 3V = 0") {
  const auto hyp = build("hyperbolic").model;
  const auto t = trace_system_residual(hyp, grid_for(hyp));
  CHECK(t.tensor.sup_norm < 1e-8);
  CHECK(t.laplacian.sup_norm < 1e-8);
  CHECK(t.equivalent(1e-8));
  const auto cyl = build("cylinder").model;
  const auto c = trace_system_residual(cyl, grid_for(cyl));
  CHECK(c.laplacian.sup_norm < 1e-12);
  CHECK(c.scalar_deviation < 1e-12);
}

TEST_CASE("broken potential is detected by both formulations") {
  const auto m = break_potential(build("hemisphere").model, 1.5);
  const auto g = grid_for(m, 200);
  const auto s = static_residual(m, g);
  CHECK(s.sup_norm > 1e-2);
  const auto t = trace_system_residual(m, g);
  CHECK_FALSE(t.trace_small(1e-8));
  CHECK_FALSE(t.static_small(1e-8));
  CHECK(t.equivalent(1e-8));
}

TEST_CASE("scaling V keeps a static triple static") {
  StaticModel m = build("hemisphere").model;
  m.potential = m.potential.scaled(1.5);
  CHECK(static_residual(m, grid_for(m, 200)).sup_norm < 1e-8);
}

TEST_CASE("sub-static classification of a perturbed hemisphere") {
  StaticModel m = build("hemisphere").model;
  m.potential = m.potential.shifted(0.1);
  const auto g = grid_for(m, 200);
  const auto rep = substatic_min_eigenvalue(m, g);
  // S = V Ric + Delta V g - Hess V with V = cos r + c: the c-term adds c Ric = 2c g.
  CHECK(rep.min_eigenvalue == doctest::Approx(0.2).epsilon(1e-8));
  CHECK(is_substatic(rep));
  m.potential = build("hemisphere").model.potential.shifted(-0.1);
  m.metric = m.metric.restricted({0.0, 1.4});
  const auto neg = substatic_min_eigenvalue(m, chebyshev_grid({0.0, 1.4}, 200));
  CHECK(neg.min_eigenvalue == doctest::Approx(-0.2).epsilon(1e-8));
  CHECK_FALSE(is_substatic(neg));
}

TEST_CASE("conformal static residual vanishes on static models") {
  for (const char* name : {"hemisphere", "horowitz_myers"}) {
    CAPTURE(name);
    const auto m = build(name).model;
    CHECK(conformal_static_residual(m, grid_for(m, 300)).sup_norm < 1e-6);
  }
}

TEST_CASE("scalar curvature is constant and normalized") {
  const auto dss = build("dss", {{"m", 0.1}});
  const auto g = grid_for(dss.model);
  CHECK(scalar_constancy(dss.model, g) < 1e-6);
  CHECK(trace_system_residual(dss.model, g).scalar_deviation < 1e-6);
  const auto cc = build("cosh_cylinder");
  CHECK(scalar_constancy(cc.model, grid_for(cc.model)) < 1e-6);
  CHECK(curvature(cc.model.metric, 0.3).scalar() == doctest::Approx(-6.0).epsilon(1e-9));
}

TEST_CASE("boundary gradient and level-set decay") {
  const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
  const auto hemi = build("hemisphere").model;
  const auto h = boundary_properties(hemi, std::numbers::pi / 2, eps);
  CHECK(h.gradient_norm == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(h.monotone);
  CHECK(h.decay_slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(h.extrapolated_limit) < 1e-6);
  // On {V = eps}, |A| = sqrt(2) cot r with cos r = eps.
  for (const auto& row : h.rows) {
    const double r = std::acos(row.epsilon);
    CHECK(row.r == doctest::Approx(r).epsilon(1e-9));
    CHECK(row.second_fundamental_form == doctest::Approx(std::sqrt(2.0) / std::tan(r)).epsilon(1e-6));
  }

  const auto dss = build("dss", {{"m", 0.1}});
  const double r1 = dss.metadata["r1"].get<double>();
  const double r2 = dss.metadata["r2"].get<double>();
  // |grad V| = |W'(r_i)| / 2 with W = 1 - r^2 - 2m/r.
  const auto w1 = [](double r) { return -2 * r + 0.2 / (r * r); };
  CHECK(boundary_properties(dss.model, r1, eps).gradient_norm == doctest::Approx(std::abs(w1(r1)) / 2).epsilon(1e-6));
  CHECK(boundary_properties(dss.model, r2, eps).gradient_norm == doctest::Approx(std::abs(w1(r2)) / 2).epsilon(1e-6));
}

TEST_CASE("level set radius by bisection") {
  const auto hemi = build("hemisphere").model;
  CHECK(level_set_radius(hemi, std::numbers::pi / 2, 0.5) == doctest::Approx(std::numbers::pi / 3).epsilon(1e-12));
}

TEST_CASE("property: static residual is invariant under grid refinement") {
  const auto m = build("dss").model;
  for (int count : {16, 64, 256}) {
    CHECK(static_residual(m, grid_for(m, count)).sup_norm < 1e-8);
  }
}

TEST_CASE("property: serial and parallel residuals are identical") {
  const auto m = build("horowitz_myers").model;
  const auto g = grid_for(m, 500);
  CheckOptions serial;
  serial.execution = Execution::Serial;
  const auto a = static_residual(m, g, serial);
  const auto b = static_residual(m, g);
  REQUIRE(a.per_point.size() == b.per_point.size());
  for (std::size_t i = 0; i < a.per_point.size(); ++i) CHECK(a.per_point[i].sup_norm == b.per_point[i].sup_norm);
}

TEST_CASE("model validation") {
  StaticModel m = build("hemisphere").model;
  m.epsilon = 2;
  CHECK_THROWS_AS(validate_model(m), Error);
  StaticModel neg = build("hemisphere").model;
  neg.potential = neg.potential.scaled(-1.0);
  CHECK_THROWS_AS(validate_model(neg), Error);
}
