#pragma once

#include <vector>

#include "staticlab/metric.hpp"

namespace staticlab {

// Boundary offset used by every sample grid: max(1e-6, 1e-3 * length).
double grid_offset(const Interval& domain);

// Chebyshev-spaced points, ascending, strictly inside `domain` and offset
// from both ends. The domain must be bounded.
std::vector<double> chebyshev_grid(const Interval& domain, int count);

// Sample points for sign checks; semi-infinite domains are probed on a
// geometric ladder reaching 1e3 past each finite end (or from 0).
std::vector<double> probe_points(const Interval& domain);

}  // namespace staticlab
