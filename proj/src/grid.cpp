#include "staticlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "staticlab/errors.hpp"

namespace staticlab {

double grid_offset(const Interval& domain) { return std::max(1e-6, 1e-3 * domain.length()); }

std::vector<double> chebyshev_grid(const Interval& domain, int count) {
  if (count < 1) fail(ErrorCode::Parameter, "grid needs at least one point");
  if (!std::isfinite(domain.lo) || !std::isfinite(domain.hi)) {
    fail(ErrorCode::Parameter, "Chebyshev grid needs a bounded interval");
  }
  const double off = grid_offset(domain);
  const double lo = domain.lo + off, hi = domain.hi - off;
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  std::vector<double> pts(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    // Reversed index so the points ascend.
    const double angle = std::numbers::pi * (2.0 * (count - 1 - k) + 1.0) / (2.0 * count);
    pts[static_cast<std::size_t>(k)] = mid + half * std::cos(angle);
  }
  return pts;
}

std::vector<double> probe_points(const Interval& domain) {
  if (std::isfinite(domain.hi) && std::isfinite(domain.lo)) return chebyshev_grid(domain, 257);
  std::vector<double> ladder;
  for (double step = 1e-3; step <= 1e3; step *= 1.25) ladder.push_back(step);
  std::vector<double> pts;
  if (std::isfinite(domain.lo)) {
    for (double s : ladder) pts.push_back(domain.lo + s);
  } else if (std::isfinite(domain.hi)) {
    for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) pts.push_back(domain.hi - *it);
  } else {
    for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) pts.push_back(-*it);
    pts.push_back(0.0);
    for (double s : ladder) pts.push_back(s);
  }
  return pts;
}

}  // namespace staticlab
