#include "staticlab/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "staticlab/errors.hpp"
#include "staticlab/report.hpp"

namespace staticlab {

namespace {

using Frame = std::vector<std::vector<double>>;

// Layout of the joint state: geodesic (7), frame ((n−1)·n), Ã ((n−1)²), b ((n−1)²).
class RiccatiSystem {
 public:
  RiccatiSystem(const StaticModel& model, std::optional<std::size_t> block)
      : geo_(model, block), n_(model.dim()), m_(n_ - 1) {}

  const ConformalGeodesicSystem& geodesic() const { return geo_; }
  int dim() const { return n_; }
  std::size_t frame_at() const { return ConformalGeodesicSystem::kStateSize; }
  std::size_t shape_at() const { return frame_at() + static_cast<std::size_t>(m_ * n_); }
  std::size_t null_at() const { return shape_at() + static_cast<std::size_t>(m_ * m_); }
  std::size_t size() const { return null_at() + static_cast<std::size_t>(m_ * m_); }

  std::vector<double> velocity(std::span<const double> y) const {
    std::vector<double> u(static_cast<std::size_t>(n_), 0.0);
    u[0] = y[3];
    if (geo_.frame_phi() >= 0) {
      u[static_cast<std::size_t>(geo_.frame_phi())] = y[4];
      u[static_cast<std::size_t>(geo_.frame_psi())] = y[5];
    }
    return u;
  }

  std::span<const double> frame_vector(std::span<const double> y, int a) const {
    return y.subspan(frame_at() + static_cast<std::size_t>(a * n_), static_cast<std::size_t>(n_));
  }

  Matrix matrix_at(std::span<const double> y, std::size_t at) const {
    Matrix x(m_);
    std::copy_n(y.begin() + static_cast<std::ptrdiff_t>(at), m_ * m_, x.data().begin());
    return x;
  }

  // R̃(W_a, u, W_b)
  Matrix conformal_jacobi(std::span<const double> y) const {
    const WarpedData d = warped_data(geo_.conformal(), y[0]);
    const auto u = velocity(y);
    Matrix out(m_);
    for (int a = 0; a < m_; ++a) {
      for (int b = a; b < m_; ++b) {
        out(a, b) = out(b, a) = jacobi_form(geo_.conformal(), d, frame_vector(y, a), u, frame_vector(y, b));
      }
    }
    return out;
  }

  // R_h(E_a, K, K, E_b) for the lifted null congruence, K = V⁻²(∂_T + γ̇).
  Matrix lorentz_jacobi(std::span<const double> y) const {
    const RadialMetric& g = geo_.model().metric;
    const WarpedData d = warped_data(g, y[0]);
    const Jet v = geo_.potential(y[0]);
    const double V = v[0], a = d.a[0];
    std::vector<double> hess(static_cast<std::size_t>(n_));
    hess[0] = (v[2] - (d.a[1] / a) * v[1]) / (a * a);
    for (std::size_t j = 0; j < g.blocks().size(); ++j) {
      for (int x = 0; x < g.blocks()[j].fiber.dim(); ++x) {
        hess[static_cast<std::size_t>(g.block_offset(j) + x)] = d.log_warp[j] * v[1] / a;
      }
    }
    const auto u = velocity(y);
    Matrix out(m_);
    for (int a2 = 0; a2 < m_; ++a2) {
      for (int b = a2; b < m_; ++b) {
        const auto wa = frame_vector(y, a2), wb = frame_vector(y, b);
        double hv = 0.0;
        for (std::size_t i = 0; i < hess.size(); ++i) hv += hess[i] * wa[i] * wb[i];
        const double rg = jacobi_form(g, d, wa, u, wb);
        out(a2, b) = out(b, a2) = (V * hv + V * V * rg) / (V * V * V * V);
      }
    }
    return out;
  }

  void rhs(std::span<const double> y, std::span<double> dy) const {
    geo_.rhs(y.first(ConformalGeodesicSystem::kStateSize), dy.first(ConformalGeodesicSystem::kStateSize));
    const int p1 = geo_.frame_phi(), p2 = geo_.frame_psi();
    for (int a = 0; a < m_; ++a) {
      const auto w = frame_vector(y, a);
      const std::size_t base = frame_at() + static_cast<std::size_t>(a * n_);
      for (int i = 0; i < n_; ++i) dy[base + static_cast<std::size_t>(i)] = 0.0;
      std::array<double, 3> act{w[0], 0.0, 0.0}, dact{};
      if (p1 >= 0) {
        act[1] = w[static_cast<std::size_t>(p1)];
        act[2] = w[static_cast<std::size_t>(p2)];
      }
      geo_.transport(y, act, dact);
      dy[base] = dact[0];
      if (p1 >= 0) {
        dy[base + static_cast<std::size_t>(p1)] = dact[1];
        dy[base + static_cast<std::size_t>(p2)] = dact[2];
      }
    }
    const Matrix at = matrix_at(y, shape_at());
    const Matrix da = -1.0 * (at * at + conformal_jacobi(y));
    std::copy(da.data().begin(), da.data().end(), dy.begin() + static_cast<std::ptrdiff_t>(shape_at()));
    const double V = geo_.potential(y[0])[0];
    const Matrix b = matrix_at(y, null_at());
    const Matrix db = (-V * V) * (b * b + lorentz_jacobi(y));
    std::copy(db.data().begin(), db.data().end(), dy.begin() + static_cast<std::ptrdiff_t>(null_at()));
  }

 private:
  ConformalGeodesicSystem geo_;
  int n_;
  int m_;
};

Frame normal_frame(const std::vector<double>& u) {
  const std::size_t n = u.size();
  Frame basis{u};
  for (std::size_t e = 0; e < n && basis.size() < n; ++e) {
    std::vector<double> v(n, 0.0);
    v[e] = 1.0;
    for (const auto& q : basis) {
      const double c = dot(v, q);
      for (std::size_t i = 0; i < n; ++i) v[i] -= c * q[i];
    }
    const double len = norm(v);
    if (len < 1e-8) continue;
    for (double& x : v) x /= len;
    basis.push_back(std::move(v));
  }
  if (basis.size() != n) fail(ErrorCode::Frame, "cannot complete the velocity to an orthonormal frame");
  basis.erase(basis.begin());
  return basis;
}

std::vector<double> velocity_of(const ConformalGeodesicSystem& sys, const GeodesicState& s, int n) {
  std::vector<double> u(static_cast<std::size_t>(n), 0.0);
  u[0] = s.u[0];
  if (sys.frame_phi() >= 0) {
    u[static_cast<std::size_t>(sys.frame_phi())] = s.u[1];
    u[static_cast<std::size_t>(sys.frame_psi())] = s.u[2];
  }
  return u;
}

// g̃-length of the radial segment [r, end] (composite Simpson).
double radial_conformal_length(const RadialMetric& conf, double r, double end) {
  const int k = 256;
  const double h = (end - r) / k;
  double sum = 0.0;
  for (int i = 0; i <= k; ++i) {
    const double x = r + i * h;
    const double w = (i == 0 || i == k) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double a = conf.lapse()(x);
    if (!std::isfinite(a)) return std::numeric_limits<double>::infinity();
    sum += w * a;
  }
  return std::abs(sum * h / 3.0);
}

void check_margin(const StaticModel& model, const RadialMetric& conf, double r, double rho0) {
  const Interval d = model.metric.domain();
  for (double end : {d.lo, d.hi}) {
    if (!std::isfinite(end) || end == r) continue;
    const double v = model.potential(end);
    if (!(v > 0.0) || !std::isfinite(v)) continue;  // conformally infinitely far
    bool axis = false;
    for (const auto& b : model.metric.blocks()) axis = axis || std::abs(b.warp(end)) < 1e-12;
    if (axis) continue;
    if (radial_conformal_length(conf, r, end) <= rho0) {
      fail(ErrorCode::Initialization, "start is within rho0 of the domain end r = " + format_double(end));
    }
  }
}

}  // namespace

ShapeOperatorState init_shape_operator(const StaticModel& model, const GeodesicState& start, double rho0,
                                       const GeodesicOptions& options) {
  if (!(rho0 >= 1e-6 && rho0 <= 0.1)) fail(ErrorCode::Parameter, "rho0 must lie in [1e-6, 0.1]");
  const RiccatiSystem sys(model, options.block);
  check_margin(model, sys.geodesic().conformal(), start.r, rho0);
  const GeodesicTrace pre = integrate_geodesic(model, start, start.t + rho0, options);
  if (pre.stop != GeodesicStop::SpanEnd) {
    fail(ErrorCode::Initialization, "geodesic stopped before reaching distance rho0");
  }
  ShapeOperatorState st;
  st.kind = "point";
  st.rho0 = rho0;
  st.point = pre.states.back();
  const int n = model.dim();
  st.frame = normal_frame(velocity_of(sys.geodesic(), st.point, n));
  const auto u = velocity_of(sys.geodesic(), st.point, n);
  const WarpedData d = warped_data(sys.geodesic().conformal(), st.point.r);
  st.a_tilde = Matrix::identity(n - 1);
  st.a_tilde = (1.0 / rho0) * st.a_tilde;
  for (int a = 0; a < n - 1; ++a) {
    for (int b = 0; b < n - 1; ++b) {
      st.a_tilde(a, b) -= rho0 / 3.0 *
                          jacobi_form(sys.geodesic().conformal(), d, st.frame[static_cast<std::size_t>(a)], u,
                                      st.frame[static_cast<std::size_t>(b)]);
    }
  }
  st.a_tilde.symmetrize();
  return st;
}

ShapeOperatorState init_level_set(const StaticModel& model, double r, int direction, double s0) {
  if (direction != 1 && direction != -1) fail(ErrorCode::Parameter, "direction must be +1 or -1");
  model.metric.require_interior(r);
  const RadialMetric conf = conformal_metric(model.metric, model.potential);
  const WarpedData d = warped_data(conf, r);
  const int n = model.dim();
  ShapeOperatorState st;
  st.kind = "level_set";
  st.point = make_start(model, r, direction > 0 ? 0.0 : std::numbers::pi);
  st.point.u = {static_cast<double>(direction), 0.0, 0.0};
  st.point.s = s0;
  std::vector<double> u(static_cast<std::size_t>(n), 0.0);
  u[0] = direction;
  st.frame = normal_frame(u);
  st.a_tilde = Matrix(n - 1);
  for (std::size_t j = 0; j < conf.blocks().size(); ++j) {
    for (int x = 0; x < conf.blocks()[j].fiber.dim(); ++x) {
      const int i = conf.block_offset(j) + x - 1;
      st.a_tilde(i, i) = direction * d.log_warp[j];
    }
  }
  return st;
}

double level_set_theta(const StaticModel& model, double r, int direction) {
  const WarpedData d = warped_data(model.metric, r);
  double h = 0.0;
  for (std::size_t j = 0; j < model.metric.blocks().size(); ++j) {
    h += model.metric.blocks()[j].fiber.dim() * d.log_warp[j];
  }
  return direction * h / model.potential(r);
}

std::string RiccatiTrace::to_csv() const {
  CsvTable t({"t", "s", "r", "V", "H_tilde", "H", "A_norm2", "theta", "dtheta_ds", "dtheta_ds_analytic", "numeric",
              "slack", "traceless", "B", "dB_ds", "ric_h_KK"});
  for (const auto& x : rows) {
    t.add_row({x.t, x.s, x.r, x.potential, x.h_tilde, x.h, x.a_norm2, x.theta, x.dtheta_ds, x.dtheta_ds_analytic,
               x.numeric ? 1.0 : 0.0, x.slack, x.traceless, x.null_expansion, x.dnull_ds, x.null_energy});
  }
  return t.str();
}

namespace {

void check_on_trace(const ConformalGeodesicSystem& sys, const GeodesicTrace& trace, const GeodesicState& p) {
  const auto& st = trace.states;
  if (st.empty()) fail(ErrorCode::Precondition, "empty geodesic trace");
  if (p.t < st.front().t - 1e-12 || p.t > st.back().t) {
    fail(ErrorCode::Frame, "initial shape operator lies outside the trace parameter range");
  }
  std::size_t k = 0;
  while (k + 2 < st.size() && st[k + 1].t < p.t) ++k;
  const GeodesicState& x0 = st[k];
  const GeodesicState& x1 = st[std::min(k + 1, st.size() - 1)];
  std::vector<double> y0 = sys.pack(x0), y1 = sys.pack(x1), d0(y0.size()), d1(y1.size());
  double r = x0.r;
  if (x1.t > x0.t) {
    sys.rhs(y0, d0);
    sys.rhs(y1, d1);
    const double h = x1.t - x0.t, q = (p.t - x0.t) / h;
    const double h00 = (1 + 2 * q) * (1 - q) * (1 - q), h10 = q * (1 - q) * (1 - q);
    const double h01 = q * q * (3 - 2 * q), h11 = q * q * (q - 1);
    r = h00 * y0[0] + h10 * h * d0[0] + h01 * y1[0] + h11 * h * d1[0];
  }
  if (std::abs(r - p.r) > 1e-6 * std::max(1.0, std::abs(p.r))) {
    fail(ErrorCode::Frame, "initial shape operator is not on the geodesic trace");
  }
}

// Hessian of log V in g̃ along u (frame components).
double log_potential_hessian(const ConformalGeodesicSystem& sys, double r, std::span<const double> u) {
  const Jet v = sys.potential(r);
  const Jet a = sys.conformal_lapse(r);
  const double f1 = v[1] / v[0], f2 = v[2] / v[0] - f1 * f1;
  const WarpedData d = warped_data(sys.conformal(), r);
  const RadialMetric& c = sys.conformal();
  double out = (f2 - (a[1] / a[0]) * f1) / (a[0] * a[0]) * u[0] * u[0];
  for (std::size_t j = 0; j < c.blocks().size(); ++j) {
    for (int x = 0; x < c.blocks()[j].fiber.dim(); ++x) {
      const double ux = u[static_cast<std::size_t>(c.block_offset(j) + x)];
      out += d.log_warp[j] * f1 / a[0] * ux * ux;
    }
  }
  return out;
}

}  // namespace

RiccatiTrace evolve_riccati(const StaticModel& model, const GeodesicTrace& trace, const ShapeOperatorState& init,
                            const RiccatiOptions& options) {
  const RiccatiSystem sys(model, trace.block);
  const ConformalGeodesicSystem& geo = sys.geodesic();
  const int n = model.dim(), m = n - 1;
  if (init.a_tilde.dim() != m || init.frame.size() != static_cast<std::size_t>(m)) {
    fail(ErrorCode::Frame, "shape operator dimension does not match the model");
  }
  check_on_trace(geo, trace, init.point);

  std::vector<double> y0 = geo.pack(init.point);
  y0.resize(sys.size(), 0.0);
  for (int a = 0; a < m; ++a) {
    std::copy(init.frame[static_cast<std::size_t>(a)].begin(), init.frame[static_cast<std::size_t>(a)].end(),
              y0.begin() + static_cast<std::ptrdiff_t>(sys.frame_at() + static_cast<std::size_t>(a * n)));
  }
  std::copy(init.a_tilde.data().begin(), init.a_tilde.data().end(),
            y0.begin() + static_cast<std::ptrdiff_t>(sys.shape_at()));
  {
    const Jet v = geo.potential(init.point.r);
    const double ldot = v[1] * init.point.u[0] / (geo.conformal_lapse(init.point.r)[0] * v[0]);
    Matrix b = init.a_tilde;
    for (int i = 0; i < m; ++i) b(i, i) += ldot;
    b = (1.0 / (v[0] * v[0])) * b;
    std::copy(b.data().begin(), b.data().end(), y0.begin() + static_cast<std::ptrdiff_t>(sys.null_at()));
  }

  const GeodesicOptions& go = options.geodesic;
  OdeOptions oo;
  oo.rtol = go.rtol;
  oo.atol = go.atol;
  oo.max_step = go.max_step;
  oo.initial_step = std::min(1e-4, go.max_step > 0 ? go.max_step : 1e-4);
  oo.blowup = std::numeric_limits<double>::infinity();
  auto events = geo.events(go, init.point.r);
  const std::size_t shape = sys.shape_at();
  const double focal = options.focal_norm;
  events.push_back({"focal", [shape, m, focal](double, std::span<const double> y) {
                      double mx = 0.0;
                      for (std::size_t i = 0; i < static_cast<std::size_t>(m * m); ++i) {
                        mx = std::max(mx, std::abs(y[shape + i]));
                      }
                      return focal - mx;
                    }});
  const double t_end = trace.states.back().t;
  if (!(t_end > init.point.t)) fail(ErrorCode::Span, "trace ends before the initial shape operator");
  const OdeResult res = integrate_ode(
      [&sys](double, std::span<const double> y, std::span<double> dy) { sys.rhs(y, dy); }, init.point.t, y0, t_end,
      oo, events);

  RiccatiTrace out;
  out.model = model.name;
  out.dim = n;
  out.init_kind = init.kind;
  if (res.stop == OdeStop::Event) {
    if (res.event == "chart") fail(ErrorCode::Chart, "geodesic reached a coordinate axis of the radial chart");
    if (res.event == "focal") out.focal = true;
    out.stop = res.event == "boundary"    ? GeodesicStop::BoundaryHit
               : res.event == "conformal" ? GeodesicStop::ConformalBoundary
                                          : GeodesicStop::SpanEnd;
  }

  for (const auto& smp : res.samples) {
    std::span<const double> y = smp.y;
    const double r = y[0];
    const auto u = sys.velocity(y);
    const Jet v = geo.potential(r);
    const double V = v[0];
    const double ldot = v[1] * y[3] / (geo.conformal_lapse(r)[0] * V);
    const Matrix at = sys.matrix_at(y, shape);
    const Matrix mt = sys.conformal_jacobi(y);
    const Matrix b = sys.matrix_at(y, sys.null_at());
    const Matrix mh = sys.lorentz_jacobi(y);

    out.max_asymmetry = std::max(out.max_asymmetry, at.asymmetry());
    for (int a = 0; a < m; ++a) {
      out.max_frame_drift = std::max(out.max_frame_drift, std::abs(dot(sys.frame_vector(y, a), u)));
      for (int c = 0; c < m; ++c) {
        const double target = a == c ? 1.0 : 0.0;
        out.max_frame_drift =
            std::max(out.max_frame_drift, std::abs(dot(sys.frame_vector(y, a), sys.frame_vector(y, c)) - target));
      }
    }

    RiccatiRow row{};
    row.t = smp.t;
    row.s = y[6];
    row.r = r;
    row.potential = V;
    row.h_tilde = at.trace();
    row.h = (row.h_tilde + m * ldot) / V;
    row.theta = row.h / V;
    Matrix ag = at;
    for (int i = 0; i < m; ++i) ag(i, i) += ldot;
    ag = (1.0 / V) * ag;
    const double fa = ag.frobenius_norm();
    row.a_norm2 = fa * fa;
    Matrix tl = ag;
    for (int i = 0; i < m; ++i) tl(i, i) -= row.h / m;
    row.traceless = tl.frobenius_norm();
    const double at2 = std::pow(at.frobenius_norm(), 2);
    const double thetadot =
        -2 * ldot * row.theta + (-mt.trace() - at2 + m * log_potential_hessian(geo, r, u)) / (V * V);
    row.dtheta_ds_analytic = thetadot / (V * V);
    row.null_expansion = b.trace();
    row.null_energy = mh.trace();
    row.dnull_ds = -(b * b).trace() - mh.trace();
    out.rows.push_back(row);
  }

  // Numeric dθ/ds from a local quintic in s over 7 rows.
  const std::size_t count = out.rows.size();
  std::vector<double> ss(count), th(count);
  for (std::size_t i = 0; i < count; ++i) {
    ss[i] = out.rows[i].s;
    th[i] = out.rows[i].theta;
  }
  for (std::size_t i = 0; i < count; ++i) {
    RiccatiRow& row = out.rows[i];
    row.dtheta_ds = row.dtheta_ds_analytic;
    if (count >= 7) {
      const std::size_t j0 = std::min(i >= 3 ? i - 3 : 0, count - 7);
      const double span = ss[j0 + 6] - ss[j0];
      if (span >= 3e-4 * std::max(1.0, std::abs(ss[i]))) {
        row.dtheta_ds = polyfit_derivatives(std::span(ss).subspan(j0, 7), std::span(th).subspan(j0, 7), ss[i], 5, 1)[1];
        row.numeric = true;
        const double scale = std::max({1.0, std::abs(row.dtheta_ds_analytic), row.theta * row.theta / m});
        out.max_fit_discrepancy =
            std::max(out.max_fit_discrepancy, std::abs(row.dtheta_ds - row.dtheta_ds_analytic) / scale);
      }
    }
    row.slack = -row.dtheta_ds - row.theta * row.theta / m;
  }
  return out;
}

nlohmann::ordered_json InequalityReport::to_json() const {
  return {{"min_slack", json_number(min_slack)},
          {"min_slack_s", json_number(min_slack_s)},
          {"min_intermediate", json_number(min_intermediate)},
          {"min_intermediate_s", json_number(min_intermediate_s)},
          {"rows", rows},
          {"analytic_rows", analytic_rows},
          {"pass", pass}};
}

InequalityReport check_inequality(const RiccatiTrace& trace, int n, double tol) {
  const double m = n - 1.0;
  InequalityReport rep{std::numeric_limits<double>::infinity(), 0.0, std::numeric_limits<double>::infinity(), 0.0,
                       trace.rows.size(), 0, true};
  for (const auto& row : trace.rows) {
    if (!row.numeric) ++rep.analytic_rows;
    const double slack = row.slack / std::max(1.0, row.theta * row.theta / m);
    if (slack < rep.min_slack) {
      rep.min_slack = slack;
      rep.min_slack_s = row.s;
    }
    const double inter =
        (-row.potential * row.potential * row.dtheta_ds - row.a_norm2) / std::max(1.0, row.a_norm2);
    if (inter < rep.min_intermediate) {
      rep.min_intermediate = inter;
      rep.min_intermediate_s = row.s;
    }
  }
  rep.pass = rep.min_slack >= -tol && rep.min_intermediate >= -tol;
  return rep;
}

nlohmann::ordered_json ComparisonReport::to_json() const {
  return {{"max_excess", json_number(max_excess)},
          {"max_excess_s", json_number(max_excess_s)},
          {"max_inverse_defect", json_number(max_inverse_defect)},
          {"rows_checked", rows_checked},
          {"pass", pass}};
}

ComparisonReport check_comparison(const RiccatiTrace& trace, int n, double tol) {
  const double m = n - 1.0;
  ComparisonReport rep{-std::numeric_limits<double>::infinity(), 0.0, 0.0, 0, true};
  const RiccatiRow* first = nullptr;
  const RiccatiRow* prev = nullptr;
  auto inverse_defect = [&](const RiccatiRow& a, const RiccatiRow& b) {
    const double lhs = 1.0 / b.theta, rhs = (b.s - a.s) / m + 1.0 / a.theta;
    return (rhs - lhs) / std::max(1.0, std::abs(lhs));
  };
  for (const auto& row : trace.rows) {
    if (!(row.theta > tol) || !(row.s > 0.0)) {
      prev = nullptr;
      continue;
    }
    ++rep.rows_checked;
    const double excess = (row.theta - m / row.s) / std::max(1.0, row.theta);
    if (excess > rep.max_excess) {
      rep.max_excess = excess;
      rep.max_excess_s = row.s;
    }
    if (!first) first = &row;
    if (prev) rep.max_inverse_defect = std::max(rep.max_inverse_defect, inverse_defect(*prev, row));
    if (first != &row) rep.max_inverse_defect = std::max(rep.max_inverse_defect, inverse_defect(*first, row));
    prev = &row;
  }
  if (rep.rows_checked == 0) rep.max_excess = 0.0;
  rep.pass = rep.max_excess <= tol && rep.max_inverse_defect <= tol;
  return rep;
}

nlohmann::ordered_json RaychaudhuriReport::to_json() const {
  return {{"max_mismatch", json_number(max_mismatch)},
          {"max_focusing", json_number(max_focusing)},
          {"min_null_energy", json_number(min_null_energy)},
          {"max_null_energy", json_number(max_null_energy)},
          {"pass", pass}};
}

RaychaudhuriReport raychaudhuri_check(const StaticModel& model, const GeodesicTrace& trace,
                                      const RiccatiTrace& riccati, double tol) {
  const NullLiftReport lift = null_lift_check(model, trace);
  if (!(lift.max_null < 1e-7 && lift.max_geodesic < 1e-7)) {
    fail(ErrorCode::Precondition, "null lift check failed on the trace");
  }
  const double m = model.dim() - 1.0;
  RaychaudhuriReport rep{0.0, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                         -std::numeric_limits<double>::infinity(), true};
  for (const auto& row : riccati.rows) {
    const double scale = std::max(1.0, std::abs(row.theta));
    rep.max_mismatch = std::max(rep.max_mismatch, std::abs(row.null_expansion - row.theta) / scale);
    const double b2 = row.null_expansion * row.null_expansion / m;
    rep.max_focusing = std::max(rep.max_focusing, (row.dnull_ds + row.null_energy + b2) / std::max(1.0, b2));
    rep.min_null_energy = std::min(rep.min_null_energy, row.null_energy);
    rep.max_null_energy = std::max(rep.max_null_energy, row.null_energy);
  }
  rep.pass = rep.max_mismatch < tol && rep.max_focusing <= tol && rep.min_null_energy >= -tol;
  return rep;
}

bool equality_case(const RiccatiTrace& trace, int n, double tol) {
  for (const auto& row : trace.rows) {
    const double scale = std::max(1.0, row.theta * row.theta / (n - 1.0));
    if (std::abs(row.slack) / scale >= tol) return false;
    if (row.traceless / std::max(1.0, std::sqrt(row.a_norm2)) >= tol) return false;
  }
  return true;
}

nlohmann::ordered_json riccati_summary(const RiccatiTrace& trace, const InequalityReport& inequality,
                                       const ComparisonReport& comparison, std::size_t geodesic_index) {
  return {{"model", trace.model},
          {"geodesic", geodesic_index},
          {"min_slack", json_number(inequality.min_slack)},
          {"comparison_pass", comparison.pass},
          {"equality_case", equality_case(trace, trace.dim)}};
}

nlohmann::ordered_json SuiteResult::to_json() const {
  return {{"model", model},
          {"traces", traces},
          {"focal", focal},
          {"min_slack", json_number(min_slack)},
          {"min_intermediate", json_number(min_intermediate)},
          {"max_comparison_excess", json_number(max_comparison_excess)},
          {"max_inverse_defect", json_number(max_inverse_defect)},
          {"inequality_pass", inequality_pass},
          {"comparison_pass", comparison_pass},
          {"max_null", json_number(max_null)},
          {"max_geodesic", json_number(max_geodesic)},
          {"max_raychaudhuri_mismatch", json_number(max_raychaudhuri_mismatch)},
          {"raychaudhuri_pass", raychaudhuri_pass}};
}

SuiteResult inequality_suite(const StaticModel& model, const SuiteOptions& o, Execution mode) {
  const Interval d = model.grid_domain();
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> radius(d.lo + o.margin * d.length(), d.hi - o.margin * d.length());
  std::uniform_real_distribution<double> heading(-std::numbers::pi, std::numbers::pi);
  std::vector<GeodesicState> starts;
  while (starts.size() < o.count) {
    const double r = radius(rng), h = heading(rng);
    // Non-radial headings, starting well above the trace floor of V.
    if (std::abs(std::sin(h)) < 0.05 || !(model.potential(r) > 2 * o.riccati.geodesic.v_floor)) continue;
    starts.push_back(make_start(model, r, h));
  }
  const int n = model.dim();
  std::vector<InequalityReport> ineq(starts.size());
  std::vector<ComparisonReport> comp(starts.size());
  std::vector<char> focal(starts.size(), 0);
  std::vector<NullLiftReport> lift(starts.size());
  std::vector<std::optional<RaychaudhuriReport>> ray(starts.size());
  for_each_index(
      starts.size(),
      [&](std::size_t i) {
        const GeodesicTrace tr = integrate_geodesic(model, starts[i], o.t_end, o.riccati.geodesic);
        const ShapeOperatorState init = init_shape_operator(model, starts[i], o.riccati.rho0, o.riccati.geodesic);
        const RiccatiTrace rt = evolve_riccati(model, tr, init, o.riccati);
        ineq[i] = check_inequality(rt, n);
        comp[i] = check_comparison(rt, n);
        focal[i] = rt.focal ? 1 : 0;
        lift[i] = null_lift_check(model, tr);
        if (lift[i].max_null < 1e-7 && lift[i].max_geodesic < 1e-7) ray[i] = raychaudhuri_check(model, tr, rt);
      },
      mode);
  SuiteResult out;
  out.model = model.name;
  out.traces = starts.size();
  out.min_slack = out.min_intermediate = std::numeric_limits<double>::infinity();
  out.max_comparison_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < starts.size(); ++i) {
    out.focal += static_cast<std::size_t>(focal[i]);
    out.min_slack = std::min(out.min_slack, ineq[i].min_slack);
    out.min_intermediate = std::min(out.min_intermediate, ineq[i].min_intermediate);
    out.max_comparison_excess = std::max(out.max_comparison_excess, comp[i].max_excess);
    out.max_inverse_defect = std::max(out.max_inverse_defect, comp[i].max_inverse_defect);
    out.inequality_pass = out.inequality_pass && ineq[i].pass;
    out.comparison_pass = out.comparison_pass && comp[i].pass;
    out.max_null = std::max(out.max_null, lift[i].max_null);
    out.max_geodesic = std::max(out.max_geodesic, lift[i].max_geodesic);
    if (ray[i]) {
      out.max_raychaudhuri_mismatch = std::max(out.max_raychaudhuri_mismatch, ray[i]->max_mismatch);
      out.raychaudhuri_pass = out.raychaudhuri_pass && ray[i]->pass;
    } else {
      out.raychaudhuri_pass = false;
    }
  }
  return out;
}

}  // namespace staticlab
