#include "staticlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "staticlab/errors.hpp"

namespace staticlab {

namespace {

constexpr double kWidth = 800, kHeight = 600;
constexpr double kLeft = 80, kRight = 30, kTop = 50, kBottom = 60;

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool log = false;

  double map(double v) const { return log ? std::log10(v) : v; }
  void include(double v) {
    if (!std::isfinite(v) || (log && !(v > 0))) return;
    lo = std::min(lo, map(v));
    hi = std::max(hi, map(v));
  }
  void finish() {
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  Axis ax, ay;
  ax.log = spec.log_x;
  ay.log = spec.log_y;
  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    if (spec.range_from >= 0 && static_cast<std::size_t>(spec.range_from) != k) continue;
    const auto& s = spec.series[k];
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if ((ax.log && !(s.x[i] > 0)) || (ay.log && !(s.y[i] > 0))) continue;
      ax.include(s.x[i]);
      ay.include(s.y[i]);
    }
  }
  if (!(ax.lo <= ax.hi) || !(ay.lo <= ay.hi)) fail(ErrorCode::Precondition, "nothing to plot: empty input");
  ax.finish();
  ay.finish();

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (ax.map(x) - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double y) { return kTop + (ay.hi - ay.map(y)) / (ay.hi - ay.lo) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  o << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  o << "<defs><clipPath id=\"plot\"><rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\""
    << fixed(pw) << "\" height=\"" << fixed(ph) << "\"/></clipPath></defs>\n";
  o << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">"
    << escape(spec.title) << "</text>\n";
  o << "<rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\"" << fixed(pw) << "\" height=\""
    << fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int t = 0; t <= 5; ++t) {
    const double fx = ax.lo + (ax.hi - ax.lo) * t / 5.0, fy = ay.lo + (ay.hi - ay.lo) * t / 5.0;
    const double gx = kLeft + pw * t / 5.0, gy = kTop + ph * (1.0 - t / 5.0);
    o << "<line x1=\"" << fixed(gx) << "\" y1=\"" << fixed(kTop + ph) << "\" x2=\"" << fixed(gx) << "\" y2=\""
      << fixed(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fixed(gx) << "\" y=\"" << fixed(kTop + ph + 20)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << tick(ax.log ? std::pow(10.0, fx) : fx) << "</text>\n";
    o << "<line x1=\"" << fixed(kLeft - 5) << "\" y1=\"" << fixed(gy) << "\" x2=\"" << fixed(kLeft) << "\" y2=\""
      << fixed(gy) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(gy + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
      << tick(ay.log ? std::pow(10.0, fy) : fy) << "</text>\n";
  }
  o << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"" << fixed(kHeight - 15)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << escape(spec.x_label)
    << "</text>\n";
  o << "<text x=\"20\" y=\"" << fixed(kTop + ph / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"14\" transform=\"rotate(-90 20 " << fixed(kTop + ph / 2) << ")\">" << escape(spec.y_label)
    << "</text>\n";

  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const auto& s = spec.series[k];
    std::string path;
    std::ostringstream marks;
    bool pen = false;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      const bool ok = std::isfinite(s.x[i]) && std::isfinite(s.y[i]) && (!ax.log || s.x[i] > 0) &&
                      (!ay.log || s.y[i] > 0);
      if (!ok) {
        pen = false;
        continue;
      }
      // Keep far-off points finite so the clip path does the trimming.
      const double x = std::clamp(px(s.x[i]), -1e4, 1e4), y = std::clamp(py(s.y[i]), -1e4, 1e4);
      path += (pen ? " L" : (path.empty() ? "M" : " M")) + fixed(x) + " " + fixed(y);
      pen = true;
      if (s.markers) marks << "<circle cx=\"" << fixed(x) << "\" cy=\"" << fixed(y) << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
    }
    if (!path.empty()) {
      o << "<path clip-path=\"url(#plot)\" d=\"" << path << "\" fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    }
    o << "<g clip-path=\"url(#plot)\">\n" << marks.str() << "</g>\n";
    const double ly = kTop + 20 + 18 * static_cast<double>(k);
    o << "<line x1=\"" << fixed(kLeft + pw - 170) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(kLeft + pw - 140)
      << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\""
      << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    o << "<text x=\"" << fixed(kLeft + pw - 132) << "\" y=\"" << fixed(ly + 4)
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string theta_plot(const RiccatiTrace& trace, int n) {
  if (trace.rows.empty()) fail(ErrorCode::Precondition, "empty trace: nothing to plot");
  PlotSeries theta{"theta", {}, {}, "#1f77b4", false, false};
  PlotSeries bound{"(n-1)/s", {}, {}, "#d62728", true, false};
  for (const auto& row : trace.rows) {
    theta.x.push_back(row.s);
    theta.y.push_back(row.theta);
    if (row.s > 0) {
      bound.x.push_back(row.s);
      bound.y.push_back((n - 1) / row.s);
    }
  }
  PlotSpec spec{trace.model + ": theta along the trace", "s", "theta", false, false, {theta, bound}, 0};
  return render_svg(spec);
}

std::string s_of_eps_plot(const SuperharmonicityReport& report) {
  if (report.epsilons.empty()) fail(ErrorCode::Precondition, "empty report: nothing to plot");
  PlotSeries s{"s(eps)", report.epsilons, report.s_of_eps, "#1f77b4", false, true};
  PlotSeries ref{"1/eps", report.epsilons, {}, "#7f7f7f", true, false};
  for (double e : report.epsilons) ref.y.push_back(1.0 / e);
  PlotSpec spec{report.model + ": s(eps)", "eps", "s", true, true, {s, ref}, -1};
  return render_svg(spec);
}

}  // namespace staticlab
