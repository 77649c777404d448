#include "staticlab/warped.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "staticlab/errors.hpp"
#include "staticlab/ode.hpp"
#include "staticlab/report.hpp"

namespace staticlab {

// Moving the f″ and V″ terms to the left:
//   −(n−2)(V/f) f″ − V″ = −(n−2) f′V′/f − V′²/V
//   −(V/f) f″ + V″     = −(n−3) V (1 − f′²)/f² − (n−2) f′V′/f − V′²/V + 2 f′V′/f
// with determinant −(n−1) V/f. Adding the rows isolates f″.
WarpedAccel ode_rhs(const WarpedState& x, int n) {
  if (n < 3) fail(ErrorCode::Parameter, "warped system needs n >= 3");
  if (!(x.f > 0.0) || !(x.v > 0.0)) fail(ErrorCode::Domain, "warped system needs f > 0 and V > 0");
  const double det = -(n - 1.0) * x.v / x.f;
  if (!(std::abs(det) >= 1e-14)) fail(ErrorCode::DegenerateMetric, "reduced system is singular");
  const double fv = x.df * x.dv / x.f, vv = x.dv * x.dv / x.v;
  const double r1 = -(n - 2.0) * fv - vv;
  const double r2 = -(n - 3.0) * x.v * (1.0 - x.df * x.df) / (x.f * x.f) - (n - 2.0) * fv - vv + 2.0 * fv;
  const double ddf = (r1 + r2) / det;
  const double ddv = r2 + (x.v / x.f) * ddf;
  return {ddf, ddv};
}

std::array<double, 2> reduced_equations(const WarpedState& x, const WarpedAccel& a, int n) {
  const double fv = x.df * x.dv / x.f, vv = x.dv * x.dv / x.v;
  const std::array<double, 5> t1{-(n - 2.0) * a.f * x.v / x.f, a.v, (n - 2.0) * fv, vv, -2.0 * a.v};
  const std::array<double, 6> t2{x.v * (n - 3.0) * (1.0 - x.df * x.df) / (x.f * x.f), -x.v * a.f / x.f, a.v,
                                 (n - 2.0) * fv, vv, -2.0 * fv};
  auto finish = [](const auto& terms) {
    double sum = 0.0, big = 1.0;
    for (double t : terms) {
      sum += t;
      big = std::max(big, std::abs(t));
    }
    return sum / big;
  };
  return {finish(t1), finish(t2)};
}

std::string to_string(WarpedStop stop) {
  switch (stop) {
    case WarpedStop::SpanEnd: return "span_end";
    case WarpedStop::PotentialZero: return "potential_zero";
    case WarpedStop::WarpZero: return "warp_zero";
    case WarpedStop::Blowup: return "blowup";
  }
  return "?";
}

std::string WarpedTrajectory::to_csv() const {
  CsvTable t({"s", "f", "df", "V", "dV"});
  for (const auto& x : states) t.add_row({x.s, x.f, x.df, x.v, x.dv});
  return t.str();
}

nlohmann::ordered_json WarpedTrajectory::boundary_log() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["stop"] = to_string(stop);
  if (!states.empty()) {
    const auto& x = states.back();
    j["s"] = json_number(x.s);
    j["f"] = json_number(x.f);
    j["df"] = json_number(x.df);
    j["V"] = json_number(x.v);
    j["dV"] = json_number(x.dv);
  }
  return j;
}

WarpedTrajectory integrate_warped(const WarpedState& initial, int n, double s_end, const WarpedOptions& o) {
  if (n < 3) fail(ErrorCode::Parameter, "warped system needs n >= 3");
  if (!(s_end > initial.s)) fail(ErrorCode::Span, "s_end must exceed the initial s");
  if (!(initial.f > 0.0) || !(initial.v > 0.0)) fail(ErrorCode::Precondition, "initial f and V must be positive");
  for (double c : {initial.f, initial.df, initial.v, initial.dv}) {
    if (!std::isfinite(c)) fail(ErrorCode::Precondition, "initial state must be finite");
  }
  if (initial.f <= o.floor || initial.v <= o.floor) fail(ErrorCode::Span, "event fires at the initial state");
  auto rhs = [n](double s, std::span<const double> y, std::span<double> dy) {
    const WarpedAccel a = ode_rhs({s, y[0], y[1], y[2], y[3]}, n);
    dy[0] = y[1];
    dy[1] = a.f;
    dy[2] = y[3];
    dy[3] = a.v;
  };
  const double floor = o.floor;
  std::vector<OdeEvent> events{
      {"potential_zero", [floor](double, std::span<const double> y) { return y[2] - floor; }},
      {"warp_zero", [floor](double, std::span<const double> y) { return y[0] - floor; }},
  };
  OdeOptions oo;
  oo.rtol = o.rtol;
  oo.atol = o.atol;
  oo.max_step = o.max_step;
  oo.initial_step = std::min(1e-4, o.max_step);
  oo.blowup = o.blowup;
  WarpedTrajectory tr;
  tr.n = n;
  const OdeResult res =
      integrate_ode(rhs, initial.s, {initial.f, initial.df, initial.v, initial.dv}, s_end, oo, events);
  for (const auto& smp : res.samples) {
    const WarpedState x{smp.t, smp.y[0], smp.y[1], smp.y[2], smp.y[3]};
    tr.states.push_back(x);
    tr.accel.push_back({smp.dy[1], smp.dy[3]});
  }
  if (res.stop == OdeStop::Event) {
    tr.stop = res.event == "potential_zero" ? WarpedStop::PotentialZero : WarpedStop::WarpZero;
  } else if (res.stop == OdeStop::Blowup) {
    tr.stop = WarpedStop::Blowup;
  }
  return tr;
}

namespace {

// Quintic Hermite basis coefficients in t ∈ [0, 1], ascending powers.
constexpr std::array<std::array<double, 6>, 6> kBasis{{
    {1, 0, 0, -10, 15, -6},
    {0, 1, 0, -6, 8, -3},
    {0, 0, 0.5, -1.5, 1.5, -0.5},
    {0, 0, 0, 10, -15, 6},
    {0, 0, 0, -4, 7, -3},
    {0, 0, 0, 0.5, -1, 0.5},
}};

struct Nodes {
  std::vector<double> x, y, dy, ddy;
};

Profile hermite_profile(std::shared_ptr<const Nodes> nodes, std::string description) {
  return Profile::from_jet(
      [nodes](const Jet& in) {
        const auto& p = *nodes;
        const double x = in.value();
        if (!(x >= p.x.front() && x <= p.x.back())) {
          fail(ErrorCode::Domain, "trajectory profile evaluated outside its samples at s = " + format_double(x));
        }
        if (p.x.size() == 1) return Jet(p.y[0]);
        std::size_t k = static_cast<std::size_t>(std::upper_bound(p.x.begin(), p.x.end(), x) - p.x.begin());
        k = std::clamp<std::size_t>(k, 1, p.x.size() - 1) - 1;
        const double h = p.x[k + 1] - p.x[k], t = (x - p.x[k]) / h;
        // H0 + H3 = 1, so only the increment enters the higher coefficients.
        const std::array<double, 6> w{0.0, h * p.dy[k], h * h * p.ddy[k], p.y[k + 1] - p.y[k], h * p.dy[k + 1],
                                      h * h * p.ddy[k + 1]};
        std::array<double, 6> c{};
        for (std::size_t b = 0; b < 6; ++b) {
          for (std::size_t e = 0; e < 6; ++e) c[e] += w[b] * kBasis[b][e];
        }
        std::array<double, 4> d{};
        for (int order = 0; order < 4; ++order) {
          double acc = 0.0;
          for (int e = 5; e >= order; --e) {
            double coef = c[static_cast<std::size_t>(e)];
            for (int q = 0; q < order; ++q) coef *= e - q;
            acc = acc * t + coef;
          }
          d[static_cast<std::size_t>(order)] = acc / std::pow(h, order);
        }
        return compose(in, p.y[k] + d[0], d[1], d[2], d[3]);
      },
      std::move(description));
}

// S¹ carries no curvature; it is represented as a flat block.
FiberBlock round_fiber(int dim) {
  return FiberBlock::constant_curvature(dim, dim == 1 ? FiberKind::Flat : FiberKind::Sphere);
}

}  // namespace

std::pair<Profile, Profile> trajectory_profiles(const WarpedTrajectory& tr) {
  if (tr.states.empty()) fail(ErrorCode::Precondition, "empty warped trajectory");
  auto f = std::make_shared<Nodes>(), v = std::make_shared<Nodes>();
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    const auto& x = tr.states[i];
    f->x.push_back(x.s);
    f->y.push_back(x.f);
    f->dy.push_back(x.df);
    f->ddy.push_back(tr.accel[i].f);
    v->x.push_back(x.s);
    v->y.push_back(x.v);
    v->dy.push_back(x.dv);
    v->ddy.push_back(tr.accel[i].v);
  }
  return {hermite_profile(f, "trajectory f"), hermite_profile(v, "trajectory V")};
}

RadialMetric reduced_metric(const WarpedTrajectory& tr, Interval window) {
  const auto [f, v] = trajectory_profiles(tr);
  return {window, Profile::constant(1.0), {{round_fiber(tr.n - 2), f}}};
}

StaticModel full_model(const WarpedTrajectory& tr, Interval window) {
  const auto [f, v] = trajectory_profiles(tr);
  RadialMetric g(window, Profile::constant(1.0),
                 {{FiberBlock::constant_curvature(1, FiberKind::Flat), v},
                  {round_fiber(tr.n - 2), f}});
  return {"warped_n" + std::to_string(tr.n), std::move(g), v, 0, {}, std::nullopt};
}

nlohmann::ordered_json ConstructionReport::to_json() const {
  nlohmann::ordered_json j;
  j["window"] = {json_number(window.lo), json_number(window.hi)};
  j["reduced_sup_norm"] = json_number(reduced.sup_norm);
  j["full_sup_norm"] = json_number(full.sup_norm);
  j["points"] = reduced.grid.size();
  j["pass"] = pass();
  return j;
}

ConstructionReport verify_construction(const WarpedTrajectory& tr, std::size_t max_points, const CheckOptions& o) {
  if (tr.states.size() < 3) fail(ErrorCode::Precondition, "warped trajectory too short to verify");
  // Regular rows: bounded logarithmic derivatives, away from a blow-up or
  // collapse at the end of the trajectory.
  auto regular = [&](std::size_t i) {
    const auto& x = tr.states[i];
    const auto& a = tr.accel[i];
    return std::max(std::abs(x.df / x.f), std::abs(x.dv / x.v)) <= 1e2 &&
           std::max(std::abs(a.f / x.f), std::abs(a.v / x.v)) <= 1e4;
  };
  double fmax = 0.0, vmax = 0.0;
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    if (!regular(i)) continue;
    fmax = std::max(fmax, tr.states[i].f);
    vmax = std::max(vmax, tr.states[i].v);
  }
  // Longest run of regular samples with f and V above 1e-2 of their maxima.
  std::size_t best_lo = 0, best_hi = 0, lo = 0;
  for (std::size_t i = 0; i <= tr.states.size(); ++i) {
    const bool ok = i < tr.states.size() && regular(i) && tr.states[i].f >= 1e-2 * fmax &&
                    tr.states[i].v >= 1e-2 * vmax;
    if (ok) continue;
    if (i > lo && i - lo > best_hi - best_lo) {
      best_lo = lo;
      best_hi = i;
    }
    lo = i + 1;
  }
  if (best_hi - best_lo < 3) fail(ErrorCode::Precondition, "no usable subinterval on the warped trajectory");
  const Interval window{tr.states[best_lo].s, tr.states[best_hi - 1].s};
  std::vector<double> grid;
  const std::size_t interior = best_hi - best_lo - 2;
  const std::size_t stride = std::max<std::size_t>(1, (interior + max_points - 1) / max_points);
  for (std::size_t i = best_lo + 1; i + 1 < best_hi; i += stride) grid.push_back(tr.states[i].s);

  ConstructionReport rep{{}, {}, window};
  const RadialMetric h = reduced_metric(tr, window);
  const Profile v = trajectory_profiles(tr).second;
  rep.reduced.model = "warped_n" + std::to_string(tr.n);
  rep.reduced.equation = "reduced";
  rep.reduced.grid = grid;
  rep.reduced.per_point.resize(grid.size());
  for_each_index(
      grid.size(),
      [&](std::size_t i) {
        const double s = grid[i];
        const Jet vj = v.jet(s);
        const TensorAtPoint t = curvature(h, s, {.cross_check = o.cross_check});
        const Matrix hess = radial_hessian(h, t, vj);
        const int m = h.dim();
        Matrix sp(m);
        const double lap = hess.trace(), grad2 = vj[1] * vj[1];
        for (int a = 0; a < m; ++a) {
          for (int b = 0; b < m; ++b) {
            sp(a, b) = vj[0] * t.ricci(a, b) - 2.0 * hess(a, b) + (a == b ? lap + grad2 / vj[0] : 0.0);
          }
        }
        const auto ev = symmetric_eigenvalues(sp);
        rep.reduced.per_point[i] = {s, sp.max_abs(), ev.front()};
      },
      o.execution);
  rep.reduced.sup_norm = 0.0;
  rep.reduced.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& row : rep.reduced.per_point) {
    rep.reduced.sup_norm = std::max(rep.reduced.sup_norm, row.sup_norm);
    rep.reduced.min_eigenvalue = std::min(rep.reduced.min_eigenvalue, row.min_eigenvalue);
  }
  rep.full = static_residual(full_model(tr, window), grid, o);
  return rep;
}

nlohmann::ordered_json FuzzReport::to_json() const {
  return {{"trajectories", trajectories}, {"nan_states", nan_states},       {"potential_zero", potential_zero},
          {"warp_zero", warp_zero},       {"blowup", blowup},               {"span_end", span_end},
          {"max_event_potential", json_number(max_event_potential)}};
}

FuzzReport fuzz_warped(int n, std::size_t count, std::uint64_t seed, double span, const WarpedOptions& o,
                       Execution mode) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.2, 2.0), slope(-1.5, 1.5);
  std::vector<WarpedState> starts(count);
  for (auto& x : starts) x = {0.0, pos(rng), slope(rng), pos(rng), slope(rng)};
  std::vector<WarpedTrajectory> out(count);
  for_each_index(
      count, [&](std::size_t i) { out[i] = integrate_warped(starts[i], n, span, o); }, mode);
  FuzzReport rep;
  rep.trajectories = count;
  for (const auto& tr : out) {
    for (const auto& x : tr.states) {
      if (!std::isfinite(x.f) || !std::isfinite(x.df) || !std::isfinite(x.v) || !std::isfinite(x.dv)) {
        ++rep.nan_states;
      }
    }
    switch (tr.stop) {
      case WarpedStop::PotentialZero:
        ++rep.potential_zero;
        rep.max_event_potential = std::max(rep.max_event_potential, tr.states.back().v);
        break;
      case WarpedStop::WarpZero: ++rep.warp_zero; break;
      case WarpedStop::Blowup: ++rep.blowup; break;
      case WarpedStop::SpanEnd: ++rep.span_end; break;
    }
  }
  return rep;
}

}  // namespace staticlab
