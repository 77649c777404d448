#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "staticlab/errors.hpp"
#include "staticlab/expr.hpp"
#include "staticlab/grid.hpp"
#include "staticlab/ode.hpp"
#include "staticlab/profile.hpp"

using namespace staticlab;

TEST_CASE("expression parsing and derivatives") {
  const auto e = Expression::parse("sqrt(1 - r^2 - 2*m/r)", "r", {{"m", 0.1}});
  const Jet j = e.evaluate(Jet::variable(0.5));
  const double w = 1 - 0.25 - 0.4;
  CHECK(j[0] == doctest::Approx(std::sqrt(w)));
  // W' = -2r + 2m/r^2, sqrt(W)' = W'/(2 sqrt W)
  CHECK(j[1] == doctest::Approx((-1.0 + 0.8) / (2 * std::sqrt(w))).epsilon(1e-14));
  CHECK(Expression::parse("-2^2")(0.0) == doctest::Approx(-4.0));
  CHECK(Expression::parse("pi + e")(0.0) == doctest::Approx(std::numbers::pi + std::numbers::e));
}

TEST_CASE("malformed expressions") {
  for (const char* bad : {"", "sin(", "r +", "foo(r)", "q*r", "1 2", "(r"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(Expression::parse(bad), Error);
  }
}

TEST_CASE("property: jet derivatives agree with finite differences") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> x(0.3, 1.2);
  for (const char* src : {"sin(r)*cosh(r)", "exp(-r^2)/(1+r)", "log(1+r^3)", "tanh(r)^3", "sqrt(r)*tan(r/2)"}) {
    const Profile p = Profile::expression(src);
    for (int i = 0; i < 5; ++i) {
      const double r = x(rng);
      const Jet a = p.jet(r);
      const Jet b = finite_difference_jet([&](double t) { return p(t); }, r, 1e-3);
      CAPTURE(src);
      CAPTURE(r);
      for (int k = 1; k <= 3; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-6 * std::max(1.0, std::abs(a[k])));
    }
  }
}

TEST_CASE("profile algebra keeps closed forms") {
  const Profile a = Profile::expression("sin(r)");
  const Profile b = Profile::expression("cos(r)");
  const Profile q = a / b;
  REQUIRE(q.expression_form());
  CHECK(q.jet(0.4)[1] == doctest::Approx(1 / (std::cos(0.4) * std::cos(0.4))).epsilon(1e-14));
  CHECK(a.pow(2.0).jet(0.4)[1] == doctest::Approx(std::sin(0.8)).epsilon(1e-14));
  CHECK(a.shifted(1.0)(0.0) == doctest::Approx(1.0));
}

TEST_CASE("jet-built profiles have no expression form") {
  const Profile p = Profile::from_jet([](const Jet& x) { return sin(x); });
  CHECK_FALSE(p.expression_form());
  CHECK(p.scaled(3.0).jet(0.2)[1] == doctest::Approx(3 * std::cos(0.2)).epsilon(1e-14));
  CHECK(p.shifted(2.0).jet(0.2)[0] == doctest::Approx(2 + std::sin(0.2)).epsilon(1e-14));
  const Profile v = Profile::from_values([](double r) { return r * r; });
  CHECK_FALSE(v.expression_form());
  CHECK(v.derivative_source() == DerivativeSource::FiniteDifference);
  CHECK(v.jet(0.7)[1] == doctest::Approx(1.4).epsilon(1e-8));
}

TEST_CASE("Chebyshev grids stay strictly inside the domain") {
  const auto g = chebyshev_grid({0.0, 1.0}, 100);
  CHECK(g.size() == 100);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g[i] > 0.0);
    CHECK(g[i] < 1.0);
    if (i > 0) CHECK(g[i] > g[i - 1]);
  }
}

TEST_CASE("ODE integrator: harmonic oscillator and terminal event") {
  const OdeRhs rhs = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  const auto res = integrate_ode(rhs, 0.0, {0.0, 1.0}, 10.0);
  CHECK(res.stop == OdeStop::SpanEnd);
  CHECK(res.samples.back().y[0] == doctest::Approx(std::sin(10.0)).epsilon(1e-8));
  OdeEvent ev{"zero", [](double, std::span<const double> y) { return y[1]; }};
  OdeOptions o;
  const auto stop = integrate_ode(rhs, 0.0, {0.0, 1.0}, 10.0, o, {ev});
  CHECK(stop.stop == OdeStop::Event);
  CHECK(stop.event == "zero");
  CHECK(stop.samples.back().t == doctest::Approx(std::numbers::pi / 2).epsilon(1e-11));
  CHECK(std::abs(dense_output(res.samples, 1.234)[0] - std::sin(1.234)) < 1e-6);
}

TEST_CASE("ODE integrator runs backward") {
  const OdeRhs rhs = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0]; };
  const auto res = integrate_ode(rhs, 1.0, {1.0}, 0.0);
  CHECK(res.samples.back().y[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}
