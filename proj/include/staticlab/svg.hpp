#pragma once

// Fixed-size (800×600) SVG line plots. Output depends only on the input data.

#include <string>
#include <vector>

#include "staticlab/boundary.hpp"
#include "staticlab/riccati.hpp"

namespace staticlab {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
  bool markers = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
  // Axis ranges come from this series when set, otherwise from all of them.
  int range_from = -1;
};

// Throws Precondition when there is no finite point to draw.
std::string render_svg(const PlotSpec& spec);

// θ against s with the (n−1)/s overlay.
std::string theta_plot(const RiccatiTrace& trace, int n);

// s(ε) on log-log axes.
std::string s_of_eps_plot(const SuperharmonicityReport& report);

}  // namespace staticlab
