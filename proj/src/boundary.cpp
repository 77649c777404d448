#include "staticlab/boundary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "staticlab/errors.hpp"
#include "staticlab/grid.hpp"
#include "staticlab/report.hpp"

namespace staticlab {

std::string to_string(RadialKind kind) {
  switch (kind) {
    case RadialKind::PointDistance: return "point_distance";
    case RadialKind::LevelSetDistance: return "level_set_distance";
    case RadialKind::EndDistance: return "end_distance";
    case RadialKind::Custom: return "custom";
  }
  return "?";
}

namespace {

constexpr std::array<double, 4> kNodes{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                       0.9602898564975363};
constexpr std::array<double, 4> kWeights{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                         0.1012285362903763};

// ∫ f over [from, to] with r = from ± (e^τ − 1) and 8-point Gauss–Legendre
// panels in τ, so long semi-infinite stretches cost no more than short ones.
template <class F>
double integrate(F&& f, double from, double to, int panels = 128) {
  if (from == to) return 0.0;
  const double sign = to > from ? 1.0 : -1.0;
  const double tmax = std::log1p(std::abs(to - from));
  const double h = tmax / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t k = 0; k < kNodes.size(); ++k) {
      for (double side : {-1.0, 1.0}) {
        const double tau = mid + side * 0.5 * h * kNodes[k];
        const double e = std::exp(tau);
        sum += kWeights[k] * f(from + sign * (e - 1.0)) * e;
      }
    }
  }
  return sign * 0.5 * h * sum;
}

double conformal_lapse(const StaticModel& m, double r) { return m.metric.lapse()(r) / m.potential(r); }

bool is_axis(const StaticModel& m, double r) {
  for (const auto& b : m.metric.blocks()) {
    if (std::abs(b.warp(r)) > 1e-12) return false;
  }
  return true;
}

bool is_domain_end(const StaticModel& m, double end) {
  return end == m.metric.domain().lo || end == m.metric.domain().hi;
}

// Finite stand-in for an end at ±∞ or where V blows up: the first point on a
// geometric ladder toward the end with V ≥ 1e12.
double far_point(const StaticModel& m, double from, double end) {
  for (int k = 0; k < 80; ++k) {
    const double step = std::ldexp(1.0, k - 10);
    const double r = std::isfinite(end) ? end - (end - from) * std::ldexp(1.0, -k) : from + (end > from ? step : -step);
    const double v = m.potential(r);
    if (!std::isfinite(v) || v >= 1e12) return r;
  }
  return std::isfinite(end) ? end : from;
}

void require_positive(double r, double v) {
  if (!(v > 0.0)) fail(ErrorCode::PotentialSign, "V <= 0 at r = " + format_double(r));
}

}  // namespace

RadialFunction custom_function(Profile phi, Interval domain) {
  return {RadialKind::Custom, std::move(phi), domain};
}

RadialFunction conformal_distance(const StaticModel& model, double anchor, int direction) {
  if (direction != 1 && direction != -1) fail(ErrorCode::Parameter, "direction must be +1 or -1");
  const Interval d = model.metric.domain();
  if (!(anchor >= d.lo && anchor <= d.hi)) fail(ErrorCode::Domain, "anchor outside the radial domain");
  const StaticModel m = model;
  const double dir = direction;
  Profile phi = Profile::from_jet(
      [m, anchor, dir](const Jet& x) {
        const double r = x.value();
        const Jet at = m.metric.lapse().jet(r) / m.potential.jet(r);
        const double value = dir * integrate([&](double q) { return conformal_lapse(m, q); }, anchor, r);
        return compose(x, value, dir * at[0], dir * at[1], dir * at[2]);
      },
      "conformal distance from r = " + format_double(anchor));
  const Interval dom = direction > 0 ? Interval{anchor, d.hi} : Interval{d.lo, anchor};
  return {is_axis(model, anchor) ? RadialKind::PointDistance : RadialKind::LevelSetDistance, std::move(phi), dom};
}

RadialFunction end_distance(const StaticModel& model, double end) {
  require_compactifiable(model, end);
  const Interval d = model.metric.domain();
  const Interval g = model.grid_domain();
  const double anchor = end == d.hi ? g.lo : g.hi;
  const double total =
      integrate([&](double q) { return conformal_lapse(model, q); }, anchor, far_point(model, anchor, end));
  const double dir = end > anchor ? -1.0 : 1.0;
  const StaticModel m = model;
  Profile phi = Profile::from_jet(
      [m, anchor, dir, total](const Jet& x) {
        const double r = x.value();
        const Jet at = m.metric.lapse().jet(r) / m.potential.jet(r);
        const double inner = integrate([&](double q) { return conformal_lapse(m, q); }, anchor, r);
        return compose(x, total - std::abs(inner), dir * at[0], dir * at[1], dir * at[2]);
      },
      "conformal distance to r = " + format_double(end));
  return {RadialKind::EndDistance, std::move(phi), d};
}

double gradient_defect(const StaticModel& model, const RadialFunction& phi, const std::vector<double>& grid) {
  double worst = 0.0;
  for (double r : grid) {
    const double grad = std::abs(phi.phi.jet(r)[1]) / conformal_lapse(model, r);
    worst = std::max(worst, std::abs(grad - 1.0));
  }
  return worst;
}

std::vector<double> L_apply(const StaticModel& model, const RadialFunction& phi, const std::vector<double>& grid,
                            Execution mode) {
  const int n = model.dim();
  std::vector<double> out(grid.size());
  for_each_index(
      grid.size(),
      [&](std::size_t i) {
        const double r = grid[i];
        model.metric.require_interior(r);
        const Jet v = model.potential.jet(r);
        require_positive(r, v[0]);
        const Jet a = model.metric.lapse().jet(r);
        const Jet p = phi.phi.jet(r);
        const double at = a[0] / v[0];
        const double log_at = a[1] / a[0] - v[1] / v[0];
        double lap = p[2] - log_at * p[1];
        for (const auto& b : model.metric.blocks()) {
          const Jet bj = b.warp.jet(r);
          lap += b.fiber.dim() * (bj[1] / bj[0] - v[1] / v[0]) * p[1];
        }
        lap /= at * at;
        const double drift = (n - 1) * v[1] * p[1] / (at * at * v[0]);
        out[i] = (lap + drift) / (v[0] * v[0]);
      },
      mode);
  return out;
}

void require_compactifiable(const StaticModel& model, double end) {
  if (model.epsilon > 0) {
    fail(ErrorCode::Precondition, model.name + " is positively curved: g/V^2 has no conformal boundary");
  }
  if (!is_domain_end(model, end)) fail(ErrorCode::Precondition, "r = " + format_double(end) + " is not a domain end");
  const Interval g = model.grid_domain();
  const double from = end == model.metric.domain().hi ? g.lo : g.hi;
  const double r = far_point(model, from, end);
  const double v = model.potential(r);
  if (std::isfinite(v) && v < 1e12) {
    fail(ErrorCode::Precondition, model.name + ": V stays bounded toward r = " + format_double(end));
  }
}

double affine_length(const StaticModel& model, double from, double to) {
  return std::abs(integrate([&](double q) { return model.potential(q) * model.metric.lapse()(q); }, from, to));
}

double level_radius_toward(const StaticModel& model, double from, double end, double level) {
  const double v0 = model.potential(from);
  if (!(v0 > 0.0)) fail(ErrorCode::PotentialSign, "V <= 0 at r = " + format_double(from));
  const bool rising = level > v0;
  double lo = from, hi = from;
  bool found = false;
  for (int k = 0; k < 120 && !found; ++k) {
    const double r = std::isfinite(end) ? end - (end - from) * std::ldexp(1.0, -k)
                                        : from + (end > from ? 1.0 : -1.0) * std::ldexp(1.0, k - 10);
    if (r == end) break;
    const double v = model.potential(r);
    if (!std::isfinite(v) || (rising ? v >= level : v <= level)) {
      hi = r;
      found = true;
    } else {
      lo = r;
    }
  }
  if (!found) fail(ErrorCode::Precondition, "level V = " + format_double(level) + " not reached toward the end");
  for (int it = 0; it < 400 && lo != hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double v = model.potential(mid);
    (!std::isfinite(v) || (rising ? v >= level : v <= level) ? hi : lo) = mid;
  }
  return hi;
}

bool SuperharmonicityReport::pass(double tol) const {
  return !rows.empty() && min_neg_lu >= -tol && max_bound_excess <= tol && std::abs(slope + 1.0) <= 0.1;
}

nlohmann::ordered_json SuperharmonicityReport::to_json(bool include_rows) const {
  nlohmann::ordered_json j;
  j["model"] = model;
  j["end"] = json_number(end);
  j["min_neg_Lu"] = json_number(min_neg_lu);
  j["max_bound_excess"] = json_number(max_bound_excess);
  j["slope_s_of_eps"] = json_number(slope);
  auto levels = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    levels.push_back({{"epsilon", json_number(epsilons[k])},
                      {"r", json_number(level_radii[k])},
                      {"s", json_number(s_of_eps[k])}});
  }
  j["s_of_eps"] = levels;
  if (include_rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      arr.push_back({json_number(row.r), json_number(row.lu), json_number(row.s), json_number(row.bound)});
    }
    j["rows"] = arr;
  }
  j["pass"] = pass();
  return j;
}

SuperharmonicityReport superharmonicity_check(const StaticModel& model, double end, const std::vector<double>& grid,
                                              const std::vector<double>& epsilons, Execution mode) {
  require_compactifiable(model, end);
  if (grid.empty()) fail(ErrorCode::Parameter, "empty grid");
  if (epsilons.size() < 2) fail(ErrorCode::Parameter, "at least two epsilon values are needed");
  const int n = model.dim();
  SuperharmonicityReport rep;
  rep.model = model.name;
  rep.end = end;
  rep.epsilons = epsilons;

  const bool upward = end == model.metric.domain().hi;
  const double base = upward ? *std::min_element(grid.begin(), grid.end()) : *std::max_element(grid.begin(), grid.end());
  for (double e : epsilons) {
    if (!(e > 0.0)) fail(ErrorCode::Parameter, "epsilon must be positive");
    const double r = level_radius_toward(model, base, end, 1.0 / e);
    rep.level_radii.push_back(r);
    rep.s_of_eps.push_back(affine_length(model, base, r));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double cnt = static_cast<double>(epsilons.size());
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    const double x = std::log(epsilons[k]), y = std::log(rep.s_of_eps[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);

  const RadialFunction u = end_distance(model, end);
  const std::vector<double> lu = L_apply(model, u, grid, mode);
  rep.rows.resize(grid.size());
  std::vector<double> excess(grid.size(), -std::numeric_limits<double>::infinity());
  for_each_index(
      grid.size(),
      [&](std::size_t i) {
        const double r = grid[i];
        const double inner = affine_length(model, base, r);
        for (std::size_t k = 0; k < epsilons.size(); ++k) {
          const double s = rep.s_of_eps[k] - inner;
          if (!(s > 0.0)) continue;
          const double bound = (n - 1) / s;
          excess[i] = std::max(excess[i], (lu[i] - bound) / std::max(1.0, bound));
        }
        const double s = rep.s_of_eps.back() - inner;
        rep.rows[i] = {r, lu[i], s, (n - 1) / s};
      },
      mode);
  rep.min_neg_lu = std::numeric_limits<double>::infinity();
  rep.max_bound_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rep.min_neg_lu = std::min(rep.min_neg_lu, -lu[i]);
    rep.max_bound_excess = std::max(rep.max_bound_excess, excess[i]);
  }
  return rep;
}

nlohmann::ordered_json ConvexityReport::to_json() const {
  nlohmann::ordered_json j;
  j["model"] = model;
  j["end"] = json_number(end);
  j["kind"] = kind;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& l : levels) {
    arr.push_back({{"epsilon", json_number(l.epsilon)},
                   {"V", json_number(l.potential)},
                   {"r", json_number(l.r)},
                   {"min_eig", json_number(l.min_eigenvalue)},
                   {"max_eig", json_number(l.max_eigenvalue)}});
  }
  j["convexity_min_eig"] = arr;
  j["min_eigenvalue"] = json_number(min_eigenvalue);
  j["pass"] = pass();
  return j;
}

ConvexityReport boundary_convexity(const StaticModel& model, double end, const std::vector<double>& epsilons,
                                   Execution mode) {
  if (!is_domain_end(model, end)) fail(ErrorCode::Precondition, "r = " + format_double(end) + " is not a domain end");
  ConvexityReport rep;
  rep.model = model.name;
  rep.end = end;
  bool zero = false;
  for (double b : model.boundary_locus) zero = zero || std::abs(b - end) <= 1e-12 * std::max(1.0, std::abs(end));
  rep.kind = zero ? "potential_zero" : "conformal";
  if (!zero) require_compactifiable(model, end);
  const Interval g = model.grid_domain();
  const bool upward = end == model.metric.domain().hi;
  const double from = zero ? 0.5 * (g.lo + g.hi) : (upward ? g.lo : g.hi);
  const double dir = upward ? 1.0 : -1.0;
  rep.levels.resize(epsilons.size());
  for_each_index(
      epsilons.size(),
      [&](std::size_t k) {
        const double e = epsilons[k];
        if (!(e > 0.0)) fail(ErrorCode::Parameter, "epsilon must be positive");
        const double level = zero ? e : 1.0 / e;
        const double r = level_radius_toward(model, from, end, level);
        const WarpedData d = warped_data(model.metric, r);
        const Jet v = model.potential.jet(r);
        const double v_nu = dir * v[1] / d.a[0];
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (double lw : d.log_warp) {
          const double eig = v[0] * dir * lw - v_nu;
          lo = std::min(lo, eig);
          hi = std::max(hi, eig);
        }
        rep.levels[k] = {e, v[0], r, lo, hi};
      },
      mode);
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& l : rep.levels) rep.min_eigenvalue = std::min(rep.min_eigenvalue, l.min_eigenvalue);
  return rep;
}

nlohmann::ordered_json ConsistencyReport::to_json() const {
  return {{"max_mismatch", json_number(max_mismatch)}, {"rows", rows}, {"pass", pass()}};
}

ConsistencyReport theta_consistency(const StaticModel& model, const RadialFunction& phi, const RiccatiTrace& trace,
                                    double margin) {
  std::vector<double> rs, theta;
  const double width = phi.domain.hi - phi.domain.lo;
  const double pad = std::isfinite(width) ? margin * width : margin;
  for (const auto& row : trace.rows) {
    if (row.r <= phi.domain.lo + pad || row.r >= phi.domain.hi - pad) continue;
    rs.push_back(row.r);
    theta.push_back(row.theta);
  }
  ConsistencyReport rep;
  rep.rows = rs.size();
  const std::vector<double> lphi = L_apply(model, phi, rs, Execution::Serial);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    rep.max_mismatch = std::max(rep.max_mismatch, std::abs(lphi[i] - theta[i]) / std::max(1.0, std::abs(theta[i])));
  }
  return rep;
}

nlohmann::ordered_json BoundarySuite::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = kSchemaVersion;
  j["model"] = superharmonicity.model;
  j["end"] = json_number(superharmonicity.end);
  j["min_neg_Lu"] = json_number(superharmonicity.min_neg_lu);
  j["slope_s_of_eps"] = json_number(superharmonicity.slope);
  j["superharmonicity"] = superharmonicity.to_json();
  j["convexity"] = convexity.to_json();
  j["pass"] = pass();
  return j;
}

BoundarySuite boundary_suite(const StaticModel& model, double end, int grid_points, Execution mode) {
  const std::vector<double> grid = chebyshev_grid(model.grid_domain(), grid_points);
  BoundarySuite suite;
  suite.superharmonicity = superharmonicity_check(model, end, grid, default_epsilons(), mode);
  suite.convexity = boundary_convexity(model, end, default_epsilons(), mode);
  return suite;
}

}  // namespace staticlab
