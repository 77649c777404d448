#include "staticlab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "staticlab/errors.hpp"
#include "staticlab/linalg.hpp"
#include "staticlab/report.hpp"

namespace staticlab {

double GeodesicState::speed() const { return std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]); }

std::string to_string(GeodesicStop stop) {
  switch (stop) {
    case GeodesicStop::SpanEnd: return "span_end";
    case GeodesicStop::BoundaryHit: return "boundary_hit";
    case GeodesicStop::ConformalBoundary: return "conformal_boundary";
    case GeodesicStop::Blowup: return "blowup";
  }
  return "?";
}

double GeodesicTrace::max_speed_drift() const {
  double m = 0.0;
  for (const auto& st : states) m = std::max(m, std::abs(st.speed() - 1.0));
  return m;
}

std::string GeodesicTrace::to_csv() const {
  CsvTable t({"t", "s", "r", "phi", "psi", "u_r", "u_phi", "u_psi", "V", "speed_drift"});
  for (const auto& st : states) {
    t.add_row({st.t, st.s, st.r, st.phi, st.psi, st.u[0], st.u[1], st.u[2], st.potential, st.speed() - 1.0});
  }
  return t.str();
}

namespace {

std::optional<std::size_t> pick_block(const RadialMetric& m, std::optional<std::size_t> requested) {
  if (requested) {
    if (*requested >= m.blocks().size()) fail(ErrorCode::Parameter, "fiber block index out of range");
    const auto& f = m.blocks()[*requested].fiber;
    if (f.dim() < 2 || (f.kind() != FiberKind::Sphere && f.kind() != FiberKind::Flat)) {
      fail(ErrorCode::Unsupported, "instantiated block must be a sphere or flat block of dimension >= 2");
    }
    return requested;
  }
  for (std::size_t j = 0; j < m.blocks().size(); ++j) {
    const auto& f = m.blocks()[j].fiber;
    if (f.dim() >= 2 && (f.kind() == FiberKind::Sphere || f.kind() == FiberKind::Flat)) return j;
  }
  return std::nullopt;
}

}  // namespace

ConformalGeodesicSystem::ConformalGeodesicSystem(const StaticModel& model, std::optional<std::size_t> block)
    : model_(&model), conformal_(conformal_metric(model.metric, model.potential)), block_(pick_block(model.metric, block)) {
  if (block_) {
    sphere_ = model.metric.blocks()[*block_].fiber.kind() == FiberKind::Sphere;
    p1_ = model.metric.block_offset(*block_);
    p2_ = p1_ + 1;
  }
}

Jet ConformalGeodesicSystem::conformal_warp(double r) const {
  if (!block_) fail(ErrorCode::Unsupported, "no instantiated fiber block");
  return conformal_.blocks()[*block_].warp.jet(r);
}

void ConformalGeodesicSystem::coefficients(std::span<const double> y, double& a, double& b, double& c,
                                           double& k) const {
  const double r = y[0];
  const Interval& d = conformal_.domain();
  if (!(r >= d.lo && r <= d.hi)) fail(ErrorCode::Domain, "geodesic left the radial domain");
  a = conformal_.lapse()(r);
  if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorCode::DegenerateMetric, "conformal lapse not positive");
  b = c = k = 0.0;
  const bool moving = y[4] != 0.0 || y[5] != 0.0;
  if (!block_ || !moving) return;
  const Jet bj = conformal_warp(r);
  b = bj[0];
  if (!(b > 0.0)) fail(ErrorCode::DegenerateMetric, "conformal warp not positive");
  c = bj[1] / (a * b);
  if (sphere_) {
    const double sn = std::sin(y[1]);
    if (std::abs(sn) < 1e-8) fail(ErrorCode::Chart, "geodesic reached the pole of the angular chart");
    k = std::cos(y[1]) / (sn * b);
  }
}

void ConformalGeodesicSystem::rhs(std::span<const double> y, std::span<double> dy) const {
  double a, b, c, k;
  coefficients(y, a, b, c, k);
  const double u0 = y[3], u1 = y[4], u2 = y[5];
  dy[0] = u0 / a;
  if (b > 0.0) {
    dy[1] = u1 / b;
    dy[2] = sphere_ ? u2 / (b * std::sin(y[1])) : u2 / b;
  } else {
    dy[1] = dy[2] = 0.0;
  }
  dy[3] = c * (u1 * u1 + u2 * u2);
  dy[4] = -c * u1 * u0 + k * u2 * u2;
  dy[5] = -c * u2 * u0 - k * u1 * u2;
  const double v = model_->potential(y[0]);
  dy[6] = v * v;
}

void ConformalGeodesicSystem::transport(std::span<const double> y, std::span<const double> w,
                                        std::span<double> dw) const {
  double a, b, c, k;
  coefficients(y, a, b, c, k);
  const double u1 = y[4], u2 = y[5];
  dw[0] = c * (u1 * w[1] + u2 * w[2]);
  dw[1] = -c * u1 * w[0] + k * u2 * w[2];
  dw[2] = -c * u2 * w[0] - k * u2 * w[1];
}

std::vector<double> ConformalGeodesicSystem::pack(const GeodesicState& s) const {
  return {s.r, s.phi, s.psi, s.u[0], s.u[1], s.u[2], s.s};
}

GeodesicState ConformalGeodesicSystem::unpack(double t, std::span<const double> y) const {
  GeodesicState s;
  s.t = t;
  s.r = y[0];
  s.phi = y[1];
  s.psi = y[2];
  s.u = {y[3], y[4], y[5]};
  s.s = y[6];
  s.potential = model_->potential(s.r);
  return s;
}

std::vector<OdeEvent> ConformalGeodesicSystem::events(const GeodesicOptions& o, double r_start) const {
  std::vector<OdeEvent> ev;
  const Profile v = model_->potential;
  const double floor = o.v_floor;
  ev.push_back({"boundary", [v, floor](double, std::span<const double> y) { return v(y[0]) - floor; }});
  if (o.inverse_floor) {
    const double inv = *o.inverse_floor;
    ev.push_back({"conformal", [v, inv](double, std::span<const double> y) { return 1.0 / v(y[0]) - inv; }});
  }
  // Finite ends where V stays positive are coordinate singularities (axes).
  const Interval d = conformal_.domain();
  for (double end : {d.lo, d.hi}) {
    if (!std::isfinite(end) || end == r_start) continue;
    const double ve = v(end);
    if (!std::isfinite(ve) || ve <= floor) continue;
    const double sign = end == d.lo ? 1.0 : -1.0;
    ev.push_back({"chart", [end, sign](double, std::span<const double> y) { return sign * (y[0] - end) - 1e-9; }});
  }
  return ev;
}

GeodesicState make_start(const StaticModel& model, double r, double heading) {
  GeodesicState s;
  s.r = r;
  s.u = {std::cos(heading), 0.0, std::sin(heading)};
  s.potential = model.potential(r);
  return s;
}

namespace {

void validate_start(const ConformalGeodesicSystem& sys, const GeodesicState& start) {
  if (std::abs(start.speed() - 1.0) > 1e-12) fail(ErrorCode::Precondition, "initial velocity must be g~-unit");
  const Interval d = sys.conformal().domain();
  const bool fiber_moving = start.u[1] != 0.0 || start.u[2] != 0.0;
  if (fiber_moving && !sys.block()) fail(ErrorCode::Unsupported, "model has no fiber block to move in");
  if (d.contains_open(start.r)) return;
  // Radial start on an axis (warp vanishes, V does not), heading inward.
  const bool at_lo = start.r == d.lo, at_hi = start.r == d.hi;
  const double v = sys.model().potential(start.r);
  if ((at_lo && start.u[0] > 0 && !fiber_moving && v > 0) || (at_hi && start.u[0] < 0 && !fiber_moving && v > 0)) {
    return;
  }
  fail(ErrorCode::Domain, "geodesic start r = " + format_double(start.r) + " not inside the domain");
}

GeodesicTrace run(const ConformalGeodesicSystem& sys, const GeodesicState& start, double t_end,
                  const GeodesicOptions& o) {
  validate_start(sys, start);
  if (!(t_end > start.t)) fail(ErrorCode::Span, "t_end must exceed the start parameter");
  OdeOptions oo;
  oo.rtol = o.rtol;
  oo.atol = o.atol;
  oo.max_step = o.max_step;
  oo.initial_step = std::min(1e-4, o.max_step > 0 ? o.max_step : 1e-4);
  const OdeResult res = integrate_ode(
      [&sys](double, std::span<const double> y, std::span<double> dy) { sys.rhs(y, dy); }, start.t, sys.pack(start),
      t_end, oo, sys.events(o, start.r));
  GeodesicTrace tr;
  tr.model = sys.model().name;
  tr.block = sys.block();
  for (const auto& smp : res.samples) tr.states.push_back(sys.unpack(smp.t, smp.y));
  if (res.stop == OdeStop::Event) {
    if (res.event == "chart") fail(ErrorCode::Chart, "geodesic reached a coordinate axis of the radial chart");
    tr.stop = res.event == "boundary" ? GeodesicStop::BoundaryHit : GeodesicStop::ConformalBoundary;
  } else if (res.stop == OdeStop::Blowup) {
    tr.stop = GeodesicStop::Blowup;
  }
  return tr;
}

}  // namespace

GeodesicTrace integrate_geodesic(const StaticModel& model, const GeodesicState& start, double t_end,
                                 const GeodesicOptions& options) {
  const ConformalGeodesicSystem sys(model, options.block);
  return run(sys, start, t_end, options);
}

std::vector<GeodesicTrace> integrate_batch(const StaticModel& model, const std::vector<GeodesicState>& starts,
                                           double t_end, const GeodesicOptions& options, Execution mode) {
  const ConformalGeodesicSystem sys(model, options.block);
  std::vector<GeodesicTrace> out(starts.size());
  for_each_index(
      starts.size(), [&](std::size_t i) { out[i] = run(sys, starts[i], t_end, options); }, mode);
  return out;
}

nlohmann::ordered_json NullLiftReport::to_json() const {
  return {{"max_null", json_number(max_null)}, {"max_geodesic", json_number(max_geodesic)}, {"rows", rows}, {"unresolved", unresolved}};
}

NullLiftReport null_lift_check(const StaticModel& model, const GeodesicTrace& trace) {
  const auto& st = trace.states;
  const std::size_t n = st.size();
  if (n < 7) fail(ErrorCode::Precondition, "null lift check needs at least 7 trace states");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(st[i].s > st[i - 1].s) || !(st[i].t > st[i - 1].t)) {
      fail(ErrorCode::TraceCorruption, "trace parameter s is not strictly increasing");
    }
  }
  const bool instantiated = trace.block.has_value();
  const bool sphere = instantiated && model.metric.blocks()[*trace.block].fiber.kind() == FiberKind::Sphere;
  // Coordinate velocities of the lifted curve (parameter t) from the trace
  // velocities; positions are only differentiated once.
  std::vector<double> ts(n), rs(n), phis(n), psis(n), vr(n), vphi(n), vpsi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = st[i];
    ts[i] = x.t;
    rs[i] = x.r;
    phis[i] = x.phi;
    psis[i] = x.psi;
    const double V = model.potential(x.r);
    vr[i] = x.u[0] * V / model.metric.lapse()(x.r);
    vphi[i] = vpsi[i] = 0.0;
    if (instantiated && (x.u[1] != 0.0 || x.u[2] != 0.0)) {
      const double b = model.metric.blocks()[*trace.block].warp(x.r);
      vphi[i] = x.u[1] * V / b;
      vpsi[i] = x.u[2] * V / (b * (sphere ? std::sin(x.phi) : 1.0));
    }
  }
  // An event-located final state sits at an irregular step; keep it out of the fits.
  const std::size_t m = (trace.stop != GeodesicStop::SpanEnd && n > 7) ? n - 1 : n;
  NullLiftReport rep{0.0, 0.0, m, 0};
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j0 = std::min(i >= 3 ? i - 3 : 0, m - 7);
    auto slope = [&](const std::vector<double>& v) {
      return polyfit_derivatives(std::span(ts).subspan(j0, 7), std::span(v).subspan(j0, 7), ts[i], 5, 1)[1];
    };
    const double rv = rs[i];
    const Jet vj = model.potential.jet(rv);
    const Jet aj = model.metric.lapse().jet(rv);
    const double V = vj[0], Vp = vj[1], a = aj[0], ap = aj[1];
    double b = 0, bp = 0;
    if (instantiated) {
      const Jet bj = model.metric.blocks()[*trace.block].warp.jet(rv);
      b = bj[0];
      bp = bj[1];
    }
    const double sn = sphere ? std::sin(phis[i]) : 1.0, cs = sphere ? std::cos(phis[i]) : 0.0;

    // Rows are skipped when the fit window is off-centre or strongly graded
    // (the step-size ramp at the start), when the positions no longer resolve
    // the motion (window displacement below 1e-5 of the coordinate size), or
    // when V < 1e-3, where V² itself loses digits near a simple zero.
    double resolved = 0.0;
    for (const auto* q : {&rs, &phis, &psis}) {
      const auto [lo, hi] = std::minmax_element(q->begin() + static_cast<std::ptrdiff_t>(j0),
                                                q->begin() + static_cast<std::ptrdiff_t>(j0 + 7));
      resolved = std::max(resolved, (*hi - *lo) / std::max(1.0, std::abs((*q)[i])));
    }
    double hmin = std::numeric_limits<double>::infinity(), hmax = 0.0;
    for (std::size_t j = j0; j + 1 < j0 + 7; ++j) {
      hmin = std::min(hmin, ts[j + 1] - ts[j]);
      hmax = std::max(hmax, ts[j + 1] - ts[j]);
    }
    if (i < 3 || i + 3 >= m || hmax > 3 * hmin || resolved < 1e-5 || V < 1e-3) {
      ++rep.unresolved;
      continue;
    }

    // Null condition from differentiated positions.
    const double pr = slope(rs), pph = instantiated ? slope(phis) : 0.0, pps = instantiated ? slope(psis) : 0.0;
    const double null = -V * V + a * a * pr * pr + b * b * (pph * pph + sn * sn * pps * pps);
    const double size = V * V + a * a * pr * pr + b * b * (pph * pph + sn * sn * pps * pps);
    rep.max_null = std::max(rep.max_null, std::abs(null) / size);

    // Geodesic equation of h in s, multiplied through by V⁴:
    //   β̈ − 2 (V̇/V) β̇ + Γ(β̇, β̇) with β̇ = (1, ṙ, φ̇, ψ̇).
    const double dr = vr[i], dph = vphi[i], dps = vpsi[i];
    const double ddr = slope(vr), ddph = instantiated ? slope(vphi) : 0.0, ddps = instantiated ? slope(vpsi) : 0.0;
    const double ldot = Vp * dr / V;
    std::array<double, 4> gam{};
    gam[0] = 2 * (Vp / V) * dr;
    gam[1] = V * Vp / (a * a) + (ap / a) * dr * dr;
    if (instantiated && b > 0.0) {
      gam[1] += -(b * bp / (a * a)) * (dph * dph + sn * sn * dps * dps);
      gam[2] = 2 * (bp / b) * dr * dph - (sphere ? sn * cs * dps * dps : 0.0);
      gam[3] = 2 * (bp / b) * dr * dps + (sphere ? 2 * (cs / sn) * dph * dps : 0.0);
    }
    const std::array<double, 4> w{V, a, b, b * sn};
    const std::array<double, 4> vel{1.0, dr, dph, dps};
    const std::array<double, 4> acc{-2 * ldot, ddr - 2 * ldot * dr, ddph - 2 * ldot * dph, ddps - 2 * ldot * dps};
    double res2 = 0, acc2 = 0, gam2 = 0, euclid = 0;
    for (std::size_t q = 0; q < 4; ++q) {
      res2 += std::pow(w[q] * (acc[q] + gam[q]), 2);
      acc2 += std::pow(w[q] * acc[q], 2);
      gam2 += std::pow(w[q] * gam[q], 2);
      euclid += std::pow(w[q] * vel[q], 2);
    }
    const double scale = std::max(std::sqrt(acc2) + std::sqrt(gam2), V * V * euclid);
    rep.max_geodesic = std::max(rep.max_geodesic, std::sqrt(res2) / scale);
  }
  return rep;
}

nlohmann::ordered_json STotalReport::to_json() const {
  nlohmann::ordered_json j;
  j["model"] = model;
  j["r_start"] = json_number(r_start);
  j["direction"] = direction;
  j["conformal_end"] = conformal_end;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    arr.push_back({{"epsilon", json_number(row.epsilon)},
                   {"s", json_number(row.s)},
                   {"t", json_number(row.t)},
                   {"r", json_number(row.r)}});
  }
  j["rows"] = arr;
  j["slope"] = json_number(slope);
  j["divergent"] = divergent;
  j["converged"] = converged;
  j["s_limit"] = json_number(s_limit);
  return j;
}

STotalReport s_total(const StaticModel& model, double r_start, int direction, const std::vector<double>& epsilons,
                     double t_cutoff, const GeodesicOptions& options) {
  if (direction != 1 && direction != -1) fail(ErrorCode::Parameter, "direction must be +1 or -1");
  const Interval d = model.metric.domain();
  const double end = direction > 0 ? d.hi : d.lo;
  STotalReport rep;
  rep.model = model.name;
  rep.r_start = r_start;
  rep.direction = direction;
  if (std::isfinite(end)) {
    rep.conformal_end = false;
  } else {
    const double far = model.potential(r_start + direction * 1e3);
    rep.conformal_end = !(std::isfinite(far) && 1.0 / far > 1e-3);
  }
  const ConformalGeodesicSystem sys(model, options.block);
  std::vector<double> eps = epsilons;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  for (double e : eps) {
    GeodesicOptions o = options;
    if (rep.conformal_end) {
      o.inverse_floor = e;
      o.v_floor = 0.0;
    } else {
      o.v_floor = e;
    }
    const GeodesicState start = make_start(model, r_start, direction > 0 ? 0.0 : std::numbers::pi);
    const GeodesicTrace tr = run(sys, start, t_cutoff, o);
    const auto& last = tr.states.back();
    rep.rows.push_back({e, last.s, last.t, last.r});
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& row : rep.rows) {
    if (!(row.s > 0)) continue;
    const double x = std::log(row.epsilon), y = std::log(row.s);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++cnt;
  }
  rep.slope = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : std::numeric_limits<double>::quiet_NaN();
  rep.divergent = std::abs(rep.slope + 1.0) <= 0.1;
  rep.s_limit = rep.rows.empty() ? 0.0 : rep.rows.back().s;
  rep.converged = rep.rows.size() >= 2 &&
                  std::abs(rep.rows.back().s - rep.rows[rep.rows.size() - 2].s) <= 1e-3 * std::abs(rep.rows.back().s);
  return rep;
}

}  // namespace staticlab
