#include "staticlab/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "staticlab/errors.hpp"
#include "staticlab/report.hpp"

namespace staticlab {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
  const OdeRhs& rhs;
  std::size_t m;
  std::array<std::vector<double>, 7> k;
  std::vector<double> tmp;

  Stepper(const OdeRhs& f, std::size_t dim) : rhs(f), m(dim), tmp(dim) {
    for (auto& v : k) v.assign(dim, 0.0);
  }

  // One step of size h from (t, y) with k[0] = f(t, y) already set. Writes the
  // fifth-order solution to out (k[6] = f at out) and returns the scaled error.
  double step(double t, const std::vector<double>& y, double h, std::vector<double>& out, const OdeOptions& o) {
    auto stage = [&](int s, double c, std::initializer_list<double> coeffs) {
      for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        int j = 0;
        for (double a : coeffs) acc += a * k[static_cast<std::size_t>(j++)][i];
        tmp[i] = y[i] + h * acc;
      }
      rhs(t + c * h, tmp, k[static_cast<std::size_t>(s)]);
    };
    stage(1, c2, {a21});
    stage(2, c3, {a31, a32});
    stage(3, c4, {a41, a42, a43});
    stage(4, c5, {a51, a52, a53, a54});
    stage(5, 1.0, {a61, a62, a63, a64, a65});
    out.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      out[i] = y[i] + h * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] + b6 * k[5][i]);
    }
    rhs(t + h, out, k[6]);
    double err = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double e = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                            e7 * k[6][i]);
      const double sc = o.atol + o.rtol * std::max(std::abs(y[i]), std::abs(out[i]));
      err = std::max(err, std::abs(e) / sc);
    }
    return err;
  }
};

bool finite_state(const std::vector<double>& y, double limit) {
  for (double v : y) {
    if (!std::isfinite(v) || std::abs(v) > limit) return false;
  }
  return true;
}

}  // namespace

OdeResult integrate_ode(const OdeRhs& rhs, double t0, std::vector<double> y0, double t_end, const OdeOptions& o,
                        const std::vector<OdeEvent>& events) {
  const std::size_t m = y0.size();
  const double dir = t_end >= t0 ? 1.0 : -1.0;
  OdeResult result;
  Stepper st(rhs, m);

  for (const auto& ev : events) {
    if (!(ev.g(t0, y0) > 0.0)) fail(ErrorCode::Span, "event '" + ev.name + "' already active at the initial state");
  }

  double t = t0;
  std::vector<double> y = std::move(y0);
  rhs(t, y, st.k[0]);
  result.samples.push_back({t, y, st.k[0]});
  if (t == t_end) return result;

  double h = std::min(o.initial_step, std::abs(t_end - t0));
  if (o.max_step > 0) h = std::min(h, o.max_step);
  std::vector<double> next;
  long steps = 0;
  while (dir * (t_end - t) > 0) {
    if (++steps > o.max_steps) fail(ErrorCode::Stiffness, "step budget exhausted at t = " + format_double(t));
    const double remaining = std::abs(t_end - t);
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    double err;
    bool ok = true;
    try {
      err = st.step(t, y, dir * h, next, o);
      ok = std::isfinite(err);
    } catch (const Error& e) {
      // Trial stages may leave the chart; shrink and retry.
      if (e.code() != ErrorCode::Domain && e.code() != ErrorCode::DegenerateMetric) throw;
      ok = false;
      err = 0.0;
    }
    if (!ok || err > 1.0) {
      ++result.rejected;
      const double factor = ok ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.25;
      h *= factor;
      if (h < o.min_step * std::max(1.0, std::abs(t))) {
        fail(ErrorCode::Stiffness, "step size collapsed at t = " + format_double(t));
      }
      continue;
    }
    const double t_next = last ? t_end : t + dir * h;

    // Terminal events: locate the crossing by bisection on the step length,
    // re-stepping from the accepted start so the located state is fifth order.
    const OdeEvent* fired = nullptr;
    for (const auto& ev : events) {
      if (!(ev.g(t_next, next) > 0.0)) {
        fired = &ev;
        break;
      }
    }
    if (fired) {
      double lo = 0.0, hi = h;
      std::vector<double> trial, k0 = st.k[0];
      while (hi - lo > o.event_tolerance) {
        const double mid = 0.5 * (lo + hi);
        st.k[0] = k0;
        st.step(t, y, dir * mid, trial, o);
        bool active = false;
        for (const auto& ev : events) active = active || !(ev.g(t + dir * mid, trial) > 0.0);
        (active ? hi : lo) = mid;
      }
      st.k[0] = k0;
      st.step(t, y, dir * hi, trial, o);
      for (const auto& ev : events) {
        if (!(ev.g(t + dir * hi, trial) > 0.0)) {
          fired = &ev;
          break;
        }
      }
      result.samples.push_back({t + dir * hi, trial, st.k[6]});
      result.stop = OdeStop::Event;
      result.event = fired->name;
      return result;
    }

    t = t_next;
    y.swap(next);
    std::swap(st.k[0], st.k[6]);
    result.samples.push_back({t, y, st.k[0]});
    if (!finite_state(y, o.blowup)) {
      result.stop = OdeStop::Blowup;
      return result;
    }
    const double factor = err > 0 ? std::min(5.0, 0.9 * std::pow(err, -0.2)) : 5.0;
    h *= factor;
    if (o.max_step > 0) h = std::min(h, o.max_step);
  }
  return result;
}

std::vector<double> dense_output(const std::vector<OdeSample>& samples, double t) {
  if (samples.empty()) fail(ErrorCode::Precondition, "dense output needs at least one sample");
  if (samples.size() == 1) return samples.front().y;
  const bool ascending = samples.back().t >= samples.front().t;
  auto before = [ascending](const OdeSample& s, double x) { return ascending ? s.t < x : s.t > x; };
  auto it = std::lower_bound(samples.begin(), samples.end(), t, before);
  if (it == samples.begin()) ++it;
  if (it == samples.end()) --it;
  const OdeSample& a = *(it - 1);
  const OdeSample& b = *it;
  const double h = b.t - a.t;
  const double u = (t - a.t) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
  std::vector<double> y(a.y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = h00 * a.y[i] + h10 * h * a.dy[i] + h01 * b.y[i] + h11 * h * b.dy[i];
  }
  return y;
}

}  // namespace staticlab
