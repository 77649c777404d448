#pragma once

// Static triples of the form
//   g = V(s)² dr² + ds² + f(s)² g_0,   g_0 round on S^{n−2}
// reduce to two second-order equations for (f, V) along s.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "staticlab/parallel.hpp"
#include "staticlab/static_check.hpp"

namespace staticlab {

struct WarpedState {
  double s = 0.0;
  double f = 1.0;
  double df = 0.0;
  double v = 1.0;
  double dv = 0.0;
};

struct WarpedAccel {
  double f;  // f″
  double v;  // V″
};

// Unique (f″, V″) solving both reduced equations. Throws DegenerateMetric when
// the 2×2 system is singular.
WarpedAccel ode_rhs(const WarpedState& state, int n);

// The reduced equations S′(∂s,∂s) and S′(X,X) evaluated at (state, f″, V″),
// each divided by max(1, largest term).
std::array<double, 2> reduced_equations(const WarpedState& state, const WarpedAccel& accel, int n);

enum class WarpedStop { SpanEnd, PotentialZero, WarpZero, Blowup };
std::string to_string(WarpedStop stop);

struct WarpedOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  double max_step = 1e-2;
  // Events fire at V = floor and f = floor.
  double floor = 1e-12;
  double blowup = 1e8;
};

struct WarpedTrajectory {
  int n = 3;
  std::vector<WarpedState> states;
  std::vector<WarpedAccel> accel;
  WarpedStop stop = WarpedStop::SpanEnd;

  std::string to_csv() const;
  // Final state together with the stop reason.
  nlohmann::ordered_json boundary_log() const;
};

WarpedTrajectory integrate_warped(const WarpedState& initial, int n, double s_end, const WarpedOptions& options = {});

// Piecewise quintic Hermite interpolants of f and V through (value, first,
// second derivative) at the trajectory samples, restricted to [lo, hi].
std::pair<Profile, Profile> trajectory_profiles(const WarpedTrajectory& trajectory);

struct ConstructionReport {
  ResidualReport reduced;  // S′ on (Σ, ds² + f² g_0)
  ResidualReport full;     // static residual of the n-dimensional metric
  Interval window;         // s-range used

  bool pass(double tol = 1e-7) const { return reduced.sup_norm < tol && full.sup_norm < tol; }
  nlohmann::ordered_json to_json() const;
};

// Checks the regular rows (|f′/f|, |V′/V| ≤ 1e2 and |f″/f|, |V″/V| ≤ 1e4) where
// f and V stay above 1e-2 of their maxima, on at most max_points samples.
ConstructionReport verify_construction(const WarpedTrajectory& trajectory, std::size_t max_points = 200,
                                       const CheckOptions& options = {});

// Σ = (window) × S^{n−2} with h = ds² + f² g_0, and the n-dimensional static
// model with g = V² dr² + h.
RadialMetric reduced_metric(const WarpedTrajectory& trajectory, Interval window);
StaticModel full_model(const WarpedTrajectory& trajectory, Interval window);

struct FuzzReport {
  std::size_t trajectories = 0;
  std::size_t nan_states = 0;
  std::size_t potential_zero = 0;
  std::size_t warp_zero = 0;
  std::size_t blowup = 0;
  std::size_t span_end = 0;
  double max_event_potential = 0.0;  // V at stop over PotentialZero stops

  nlohmann::ordered_json to_json() const;
};

FuzzReport fuzz_warped(int n, std::size_t count, std::uint64_t seed, double span = 5.0,
                       const WarpedOptions& options = {}, Execution mode = Execution::Parallel);

}  // namespace staticlab
