#include "staticlab/static_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "staticlab/errors.hpp"
#include "staticlab/grid.hpp"
#include "staticlab/report.hpp"

namespace staticlab {

Interval StaticModel::grid_domain() const {
  const Interval d = sample_domain.value_or(metric.domain());
  if (!std::isfinite(d.lo) || !std::isfinite(d.hi)) {
    fail(ErrorCode::Parameter, "model '" + name + "' needs a bounded sample domain");
  }
  return d;
}

void validate_model(const StaticModel& model) {
  if (model.epsilon < -1 || model.epsilon > 1) fail(ErrorCode::Parameter, "epsilon must be -1, 0 or 1");
  for (double r : probe_points(model.metric.domain())) {
    if (!(model.potential(r) > 0.0)) {
      fail(ErrorCode::PotentialSign, "potential not positive at r = " + format_double(r));
    }
  }
}

nlohmann::ordered_json ResidualReport::to_json(bool include_rows) const {
  nlohmann::ordered_json j;
  j["model"] = model;
  j["equation"] = equation;
  j["grid"] = json_array(grid);
  j["sup_norm"] = json_number(sup_norm);
  j["min_eigenvalue"] = json_number(min_eigenvalue);
  if (include_rows) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : per_point) {
      rows.push_back({{"r", json_number(row.r)},
                      {"sup_norm", json_number(row.sup_norm)},
                      {"min_eigenvalue", json_number(row.min_eigenvalue)}});
    }
    j["per_point"] = rows;
  }
  return j;
}

std::string ResidualReport::to_csv() const {
  CsvTable t({"r", "sup_norm", "min_eigenvalue"});
  for (const auto& row : per_point) t.add_row({row.r, row.sup_norm, row.min_eigenvalue});
  return t.str();
}

namespace {

void require_positive(const StaticModel& model, double r, double v) {
  if (!(v > 0.0)) {
    fail(ErrorCode::PotentialSign,
         "potential of '" + model.name + "' not positive at r = " + format_double(r));
  }
}

template <typename Fn>
ResidualReport assemble(const StaticModel& model, std::string equation, const std::vector<double>& grid,
                        Execution mode, Fn&& tensor_at) {
  ResidualReport rep;
  rep.model = model.name;
  rep.equation = std::move(equation);
  rep.grid = grid;
  rep.per_point.resize(grid.size());
  for_each_index(
      grid.size(),
      [&](std::size_t i) {
        const double r = grid[i];
        const Matrix s = tensor_at(r);
        const auto ev = symmetric_eigenvalues(s);
        rep.per_point[i] = {r, s.max_abs(), ev.front()};
      },
      mode);
  rep.sup_norm = 0.0;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& row : rep.per_point) {
    rep.sup_norm = std::max(rep.sup_norm, row.sup_norm);
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, row.min_eigenvalue);
  }
  if (grid.empty()) rep.min_eigenvalue = 0.0;
  return rep;
}

Matrix ricci_matrix(const TensorAtPoint& t) {
  Matrix m(t.dim());
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j) m(i, j) = t.ricci(i, j);
  return m;
}

}  // namespace

Matrix radial_hessian(const RadialMetric& metric, const TensorAtPoint& gamma, const Jet& v) {
  const int n = metric.dim();
  Matrix h(n);
  const double a = metric.lapse()(gamma.r());
  h(0, 0) = (v[2] - gamma.christoffel(0, 0, 0) * v[1]) / (a * a);
  for (std::size_t j = 0; j < metric.blocks().size(); ++j) {
    const double b = metric.blocks()[j].warp(gamma.r());
    for (int x = metric.block_offset(j); x < metric.block_offset(j) + metric.blocks()[j].fiber.dim(); ++x) {
      h(x, x) = -gamma.christoffel(0, x, x) * v[1] / (b * b);
    }
  }
  return h;
}

Matrix static_tensor(const StaticModel& model, double r, bool cross_check) {
  const Jet v = model.potential.jet(r);
  require_positive(model, r, v.value());
  const TensorAtPoint t = curvature(model.metric, r, {.cross_check = cross_check});
  const Matrix hess = radial_hessian(model.metric, t, v);
  const double lap = hess.trace();
  Matrix s = v.value() * ricci_matrix(t) - hess;
  for (int i = 0; i < s.dim(); ++i) s(i, i) += lap;
  return s;
}

ResidualReport static_residual(const StaticModel& model, const std::vector<double>& grid, const CheckOptions& o) {
  return assemble(model, "static", grid, o.execution,
                  [&](double r) { return static_tensor(model, r, o.cross_check); });
}

TraceSystemReport trace_system_residual(const StaticModel& model, const std::vector<double>& grid,
                                        const CheckOptions& o) {
  const int n = model.dim();
  const double eps = model.epsilon;
  struct Point {
    ResidualRow tensor;
    double laplacian;
    double scalar_dev;
    double static_sup;
  };
  std::vector<Point> pts(grid.size());
  for_each_index(
      grid.size(),
      [&](std::size_t i) {
        const double r = grid[i];
        const Jet v = model.potential.jet(r);
        require_positive(model, r, v.value());
        const TensorAtPoint t = curvature(model.metric, r, {.cross_check = o.cross_check});
        const Matrix hess = radial_hessian(model.metric, t, v);
        const Matrix base = v.value() * ricci_matrix(t) - hess;
        Matrix m = base, s = base;
        for (int k = 0; k < n; ++k) {
          m(k, k) -= n * eps * v.value();
          s(k, k) += hess.trace();
        }
        pts[i] = {{r, m.max_abs(), symmetric_eigenvalues(m).front()},
                  hess.trace() + n * eps * v.value(),
                  std::abs(t.scalar() - eps * n * (n - 1)),
                  s.max_abs()};
      },
      o.execution);

  TraceSystemReport out;
  for (ResidualReport* rep : {&out.tensor, &out.laplacian}) {
    rep->model = model.name;
    rep->grid = grid;
    rep->sup_norm = 0.0;
    rep->min_eigenvalue = grid.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  }
  out.tensor.equation = "trace_tensor";
  out.laplacian.equation = "trace_laplacian";
  out.scalar_deviation = 0.0;
  out.static_sup_norm = 0.0;
  for (const auto& p : pts) {
    out.tensor.per_point.push_back(p.tensor);
    out.tensor.sup_norm = std::max(out.tensor.sup_norm, p.tensor.sup_norm);
    out.tensor.min_eigenvalue = std::min(out.tensor.min_eigenvalue, p.tensor.min_eigenvalue);
    out.laplacian.per_point.push_back({p.tensor.r, std::abs(p.laplacian), p.laplacian});
    out.laplacian.sup_norm = std::max(out.laplacian.sup_norm, std::abs(p.laplacian));
    out.laplacian.min_eigenvalue = std::min(out.laplacian.min_eigenvalue, p.laplacian);
    out.scalar_deviation = std::max(out.scalar_deviation, p.scalar_dev);
    out.static_sup_norm = std::max(out.static_sup_norm, p.static_sup);
  }
  return out;
}

ResidualReport substatic_min_eigenvalue(const StaticModel& model, const std::vector<double>& grid,
                                        const CheckOptions& o) {
  ResidualReport rep = static_residual(model, grid, o);
  rep.equation = "substatic";
  return rep;
}

bool is_substatic(const ResidualReport& report, double tol) { return report.min_eigenvalue >= -tol; }

Matrix conformal_static_tensor(const StaticModel& model, const RadialMetric& conformal, const Profile& inverse_potential,
                               double r, bool cross_check) {
  require_positive(model, r, model.potential(r));
  const int n = conformal.dim();
  const Jet w = inverse_potential.jet(r);
  const TensorAtPoint t = curvature(conformal, r, {.cross_check = cross_check});
  const Matrix hess = radial_hessian(conformal, t, w);
  return w.value() * ricci_matrix(t) + static_cast<double>(n - 1) * hess;
}

ResidualReport conformal_static_residual(const StaticModel& model, const std::vector<double>& grid,
                                         const CheckOptions& o) {
  for (double r : grid) require_positive(model, r, model.potential(r));
  const RadialMetric conformal = conformal_metric(model.metric, model.potential);
  const Profile inverse = Profile::constant(1.0) / model.potential;
  return assemble(model, "conformal_static", grid, o.execution, [&](double r) {
    return conformal_static_tensor(model, conformal, inverse, r, o.cross_check);
  });
}

double scalar_constancy(const StaticModel& model, const std::vector<double>& grid) {
  if (grid.empty()) return 0.0;
  std::vector<double> values(grid.size());
  for_each_index(grid.size(), [&](std::size_t i) {
    values[i] = curvature(model.metric, grid[i], {.cross_check = false}).scalar();
  });
  double dev = 0.0;
  for (double v : values) dev = std::max(dev, std::abs(v - values.front()));
  return dev;
}

namespace {

double inward(const StaticModel& model, double r_b) {
  const Interval d = model.metric.domain();
  return std::abs(r_b - d.lo) <= std::abs(r_b - d.hi) ? 1.0 : -1.0;
}

double gradient_norm_at(const StaticModel& model, double r) {
  const Jet v = model.potential.jet(r);
  return std::abs(v[1]) / model.metric.lapse()(r);
}

}  // namespace

double level_set_radius(const StaticModel& model, double r_b, double level) {
  const Interval d = model.grid_domain();
  const double far = 0.5 * (d.lo + d.hi);
  if (!(model.potential(far) > level)) {
    fail(ErrorCode::Precondition, "level " + format_double(level) + " not reached inside the domain");
  }
  double lo = r_b, hi = far;
  for (int it = 0; it < 400 && std::abs(hi - lo) > 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = model.potential(mid);
    (std::isfinite(v) && v > level ? hi : lo) = mid;
  }
  return hi;
}

nlohmann::ordered_json BoundaryPropertiesReport::to_json() const {
  nlohmann::ordered_json j;
  j["r_boundary"] = json_number(r_boundary);
  j["gradient_norm"] = json_number(gradient_norm);
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    arr.push_back({{"epsilon", json_number(row.epsilon)},
                   {"r", json_number(row.r)},
                   {"second_fundamental_form", json_number(row.second_fundamental_form)}});
  }
  j["level_sets"] = arr;
  j["monotone"] = monotone;
  j["decay_slope"] = json_number(decay_slope);
  j["extrapolated_limit"] = json_number(extrapolated_limit);
  return j;
}

BoundaryPropertiesReport boundary_properties(const StaticModel& model, double r_b, const std::vector<double>& epsilons) {
  if (model.epsilon != 1) fail(ErrorCode::Precondition, "boundary properties need epsilon = +1");
  const double dir = inward(model, r_b);
  double v0 = model.potential(r_b);
  if (!std::isfinite(v0)) v0 = model.potential(r_b + dir * 1e-12);
  if (!(std::abs(v0) < 1e-5)) {
    fail(ErrorCode::Precondition, "potential does not vanish at r = " + format_double(r_b));
  }
  BoundaryPropertiesReport rep;
  rep.r_boundary = r_b;
  // Quadratic Richardson extrapolation from offsets δ, 2δ, 4δ.
  const double delta = 1e-4;
  const double q1 = gradient_norm_at(model, r_b + dir * delta);
  const double q2 = gradient_norm_at(model, r_b + dir * 2 * delta);
  const double q4 = gradient_norm_at(model, r_b + dir * 4 * delta);
  rep.gradient_norm = (8 * q1 - 6 * q2 + q4) / 3.0;

  std::vector<double> eps = epsilons;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  for (double e : eps) {
    const double r = level_set_radius(model, r_b, e);
    const WarpedData d = warped_data(model.metric, r);
    double sq = 0.0;
    for (std::size_t j = 0; j < d.log_warp.size(); ++j) {
      sq += model.metric.blocks()[j].fiber.dim() * d.log_warp[j] * d.log_warp[j];
    }
    rep.rows.push_back({e, r, std::sqrt(sq)});
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    if (rep.rows[i].second_fundamental_form > rep.rows[i - 1].second_fundamental_form) rep.monotone = false;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& row : rep.rows) {
    if (!(row.second_fundamental_form > 0)) continue;
    const double x = std::log(row.epsilon), y = std::log(row.second_fundamental_form);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++cnt;
  }
  rep.decay_slope = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : std::numeric_limits<double>::quiet_NaN();
  if (rep.rows.size() >= 2) {
    const auto& a = rep.rows[rep.rows.size() - 1];
    const auto& b = rep.rows[rep.rows.size() - 2];
    rep.extrapolated_limit = a.second_fundamental_form -
                             a.epsilon * (b.second_fundamental_form - a.second_fundamental_form) / (b.epsilon - a.epsilon);
  } else {
    rep.extrapolated_limit = rep.rows.empty() ? 0.0 : rep.rows.back().second_fundamental_form;
  }
  return rep;
}

}  // namespace staticlab
