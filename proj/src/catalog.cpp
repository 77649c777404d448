#include "staticlab/catalog.hpp"

#include <cmath>
#include <numbers>

#include "staticlab/errors.hpp"
#include "staticlab/report.hpp"

namespace staticlab {

namespace {

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

int int_param(const std::map<std::string, double>& p, const std::string& key, int fallback) {
  const double v = param(p, key, fallback);
  if (v != std::floor(v)) fail(ErrorCode::Parameter, "'" + key + "' must be an integer");
  return static_cast<int>(v);
}

void check_known(const std::map<std::string, double>& p, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : p) {
    bool ok = false;
    for (const char* key : keys) ok = ok || k == key;
    if (!ok) fail(ErrorCode::Parameter, "unknown parameter '" + k + "'");
    if (!std::isfinite(v)) fail(ErrorCode::Parameter, "parameter '" + k + "' must be finite");
  }
}

FiberBlock round_fiber(int dim) {
  return dim == 1 ? FiberBlock::constant_curvature(1, FiberKind::Flat)
                  : FiberBlock::constant_curvature(dim, FiberKind::Sphere);
}

CatalogEntry hemisphere(int n) {
  if (n < 2) fail(ErrorCode::Parameter, "hemisphere needs n >= 2");
  CatalogEntry e{"hemisphere", {{"n", n}}, StaticModel{"hemisphere",
             RadialMetric({0.0, std::numbers::pi / 2}, Profile::constant(1.0),
                          {{round_fiber(n - 1), Profile::expression("sin(r)")}}),
             Profile::expression("cos(r)"),
             1,
             {std::numbers::pi / 2},
             std::nullopt}};
  e.expected.scalar = n * (n - 1.0);
  e.expected.theta_of_s = [n](double s) { return (n - 1) / s; };
  e.expected.s_of_r = [](double r) { return std::sin(r); };
  return e;
}

CatalogEntry cylinder(int n) {
  if (n < 3) fail(ErrorCode::Parameter, "cylinder needs n >= 3");
  // Fiber radius chosen so that R = n(n − 1) and V = sin(√n t) is static.
  const double rho = std::sqrt((n - 2.0) / n);
  const double len = std::numbers::pi / std::sqrt(static_cast<double>(n));
  CatalogEntry e{"cylinder", {{"n", n}}, StaticModel{"cylinder",
             RadialMetric({0.0, len}, Profile::constant(1.0),
                          {{FiberBlock::constant_curvature(n - 1, FiberKind::Sphere), Profile::constant(rho)}}),
             Profile::expression("sin(k*r)", {{"k", std::sqrt(static_cast<double>(n))}}),
             1,
             {0.0, len},
             std::nullopt}};
  e.expected.scalar = n * (n - 1.0);
  e.expected.theta_of_s = [](double) { return 0.0; };
  e.metadata["fiber_radius"] = json_number(rho);
  return e;
}

CatalogEntry dss(double m) {
  const auto [r1, r2] = dss_horizons(m);
  const std::map<std::string, double> p{{"m", m}};
  CatalogEntry e{"dss", p, StaticModel{"dss",
             RadialMetric({r1, r2}, Profile::expression("1/sqrt(1 - r^2 - 2*m/r)", p),
                          {{FiberBlock::constant_curvature(2, FiberKind::Sphere), Profile::expression("r")}}),
             Profile::expression("sqrt(1 - r^2 - 2*m/r)", p),
             1,
             {r1, r2},
             std::nullopt}};
  e.expected.scalar = 6.0;
  e.expected.theta_of_s = [](double s) { return 2.0 / s; };
  e.expected.s_of_r = [](double r) { return r; };
  e.metadata["r1"] = json_number(r1);
  e.metadata["r2"] = json_number(r2);
  return e;
}

CatalogEntry hyperbolic(int n) {
  if (n < 2) fail(ErrorCode::Parameter, "hyperbolic model needs n >= 2");
  CatalogEntry e{"hyperbolic", {{"n", n}}, StaticModel{"hyperbolic",
             RadialMetric({0.0, INFINITY}, Profile::constant(1.0),
                          {{round_fiber(n - 1), Profile::expression("sinh(r)")}}),
             Profile::expression("cosh(r)"),
             -1,
             {},
             Interval{0.0, 5.0}}};
  e.expected.scalar = -n * (n - 1.0);
  e.conformal_end = INFINITY;
  return e;
}

CatalogEntry horowitz_myers(int n, double r0) {
  if (n < 3) fail(ErrorCode::Parameter, "Horowitz-Myers needs n >= 3");
  if (!(r0 > 0)) fail(ErrorCode::Parameter, "r0 must be positive");
  const std::map<std::string, double> p{{"r0", r0}, {"dim", n}};
  CatalogEntry e{"horowitz_myers", {{"n", n}, {"r0", r0}}, StaticModel{"horowitz_myers",
             RadialMetric({r0, INFINITY}, Profile::expression("1/(r*sqrt(1 - (r0/r)^dim))", p),
                          {{FiberBlock::constant_curvature(1, FiberKind::Flat),
                            Profile::expression("r*sqrt(1 - (r0/r)^dim)", p)},
                           {FiberBlock::constant_curvature(n - 2, FiberKind::Flat), Profile::expression("r")}}),
             Profile::expression("r"),
             -1,
             {},
             Interval{r0, r0 + 5.0}}};
  e.expected.scalar = -n * (n - 1.0);
  e.conformal_end = INFINITY;
  e.metadata["phi_period"] = json_number(4 * std::numbers::pi / (n * r0));
  return e;
}

CatalogEntry cosh_cylinder(int n) {
  if (n < 3) fail(ErrorCode::Parameter, "cosh-cylinder needs n >= 3");
  CatalogEntry e{"cosh_cylinder", {{"n", n}}, StaticModel{"cosh_cylinder",
             RadialMetric({-INFINITY, INFINITY}, Profile::constant(1.0),
                          {{FiberBlock::einstein(n - 1, -(n - 2.0)), Profile::expression("cosh(r)")}}),
             Profile::constant(1.0),
             -1,
             {},
             Interval{-3.0, 3.0}}};
  e.static_claim = false;
  e.expected.scalar = -n * (n - 1.0);
  return e;
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"hemisphere", "cylinder", "dss", "hyperbolic", "horowitz_myers", "cosh_cylinder", "broken"};
}

std::pair<double, double> dss_horizons(double m, int n) {
  if (n != 3) fail(ErrorCode::Parameter, "de Sitter-Schwarzschild horizons are implemented for n = 3");
  const double m_crit = 1.0 / (3.0 * std::sqrt(3.0));
  if (!(m > 0.0 && m < m_crit)) {
    fail(ErrorCode::Parameter, "m = " + format_double(m) + " outside (0, 1/(3*sqrt(3))): no two positive roots");
  }
  auto p = [m](double r) { return r - r * r * r - 2 * m; };
  auto bisect = [&](double lo, double hi) {
    // p(lo) and p(hi) have opposite signs.
    const bool rising = p(lo) < 0;
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
      const double mid = 0.5 * (lo + hi);
      ((p(mid) < 0) == rising ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double peak = 1.0 / std::sqrt(3.0);
  return {bisect(0.0, peak), bisect(peak, 1.0)};
}

StaticModel break_potential(const StaticModel& model, double k) {
  if (!(k > 0.0)) fail(ErrorCode::Parameter, "break exponent must be positive");
  StaticModel out = model;
  out.name = model.name + "_broken";
  out.potential = model.potential.pow(k);
  return out;
}

CatalogEntry build(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "hemisphere") {
    check_known(params, {"n"});
    return hemisphere(int_param(params, "n", 3));
  }
  if (name == "cylinder") {
    check_known(params, {"n"});
    return cylinder(int_param(params, "n", 3));
  }
  if (name == "dss") {
    check_known(params, {"m", "n"});
    if (int_param(params, "n", 3) != 3) fail(ErrorCode::Parameter, "dss is implemented for n = 3");
    return dss(param(params, "m", 0.1));
  }
  if (name == "hyperbolic") {
    check_known(params, {"n"});
    return hyperbolic(int_param(params, "n", 3));
  }
  if (name == "horowitz_myers") {
    check_known(params, {"n", "r0"});
    return horowitz_myers(int_param(params, "n", 4), param(params, "r0", 1.0));
  }
  if (name == "cosh_cylinder") {
    check_known(params, {"n"});
    return cosh_cylinder(int_param(params, "n", 3));
  }
  if (name == "broken") {
    check_known(params, {"n", "k"});
    CatalogEntry e = hemisphere(int_param(params, "n", 3));
    const double k = param(params, "k", 2.0);
    e.name = "broken";
    e.params["k"] = k;
    e.model = break_potential(e.model, k);
    e.model.name = "broken";
    e.static_claim = false;
    e.expected = {};
    return e;
  }
  fail(ErrorCode::Parameter, "unknown model '" + name + "'");
}

}  // namespace staticlab
