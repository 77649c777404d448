#pragma once

// Geodesics of g̃ = g/V² restricted to the radial direction and one
// instantiated two-dimensional fiber plane (angles φ, ψ for a sphere block,
// Cartesian coordinates for a flat block). The reparametrization
// ds = V² dt is integrated alongside.

#include <array>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "staticlab/ode.hpp"
#include "staticlab/parallel.hpp"
#include "staticlab/static_check.hpp"

namespace staticlab {

struct GeodesicState {
  double t = 0.0;
  double s = 0.0;
  double r = 0.0;
  double phi = std::numbers::pi / 2;
  double psi = 0.0;
  // g̃-orthonormal velocity components along e_r, e_φ, e_ψ.
  std::array<double, 3> u{1.0, 0.0, 0.0};
  double potential = 0.0;

  double speed() const;
};

struct GeodesicOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 1e-2;
  // Integration halts at V = v_floor (event located to 1e-12 in t).
  double v_floor = 1e-6;
  // Optional halt at 1/V = inverse_floor (approach to a conformal boundary).
  std::optional<double> inverse_floor;
  // Fiber block carrying φ, ψ; the first sphere or flat block of dim ≥ 2 when unset.
  std::optional<std::size_t> block;
};

enum class GeodesicStop { SpanEnd, BoundaryHit, ConformalBoundary, Blowup };
std::string to_string(GeodesicStop stop);

struct GeodesicTrace {
  std::string model;
  std::vector<GeodesicState> states;
  GeodesicStop stop = GeodesicStop::SpanEnd;
  std::optional<std::size_t> block;

  double max_speed_drift() const;
  std::string to_csv() const;
};

// ODE for (r, φ, ψ, u_r, u_φ, u_ψ, s) in arclength t of g̃. Shared with the
// Riccati engine, which appends frame and shape-operator components.
class ConformalGeodesicSystem {
 public:
  static constexpr std::size_t kStateSize = 7;

  ConformalGeodesicSystem(const StaticModel& model, std::optional<std::size_t> block);

  const StaticModel& model() const { return *model_; }
  const RadialMetric& conformal() const { return conformal_; }
  std::optional<std::size_t> block() const { return block_; }
  // Frame indices of e_φ and e_ψ in the n-dimensional orthonormal frame (−1 if radial only).
  int frame_phi() const { return p1_; }
  int frame_psi() const { return p2_; }

  // Potential, g̃ lapse and warp of the instantiated block (with derivatives).
  Jet potential(double r) const { return model_->potential.jet(r); }
  Jet conformal_lapse(double r) const { return conformal_.lapse().jet(r); }
  Jet conformal_warp(double r) const;
  bool sphere_chart() const { return sphere_; }

  void rhs(std::span<const double> y, std::span<double> dy) const;
  // Parallel transport of a vector with active components w (r, φ, ψ).
  void transport(std::span<const double> y, std::span<const double> w, std::span<double> dw) const;

  std::vector<double> pack(const GeodesicState& s) const;
  GeodesicState unpack(double t, std::span<const double> y) const;

  std::vector<OdeEvent> events(const GeodesicOptions& options, double r_start) const;

 private:
  // c = d log b̃ / dt̃ along e_r and k = cot φ / b̃ at y.
  void coefficients(std::span<const double> y, double& a, double& b, double& c, double& k) const;

  const StaticModel* model_;
  RadialMetric conformal_;
  std::optional<std::size_t> block_;
  bool sphere_ = false;
  int p1_ = -1, p2_ = -1;
};

// Unit-speed g̃-geodesic from start (t, s taken from start).
GeodesicTrace integrate_geodesic(const StaticModel& model, const GeodesicState& start, double t_end,
                                 const GeodesicOptions& options = {});

std::vector<GeodesicTrace> integrate_batch(const StaticModel& model, const std::vector<GeodesicState>& starts,
                                           double t_end, const GeodesicOptions& options = {},
                                           Execution mode = Execution::Parallel);

// Initial state at radius r with unit velocity at angle `heading` from e_r in
// the (e_r, e_ψ) plane.
GeodesicState make_start(const StaticModel& model, double r, double heading);

struct NullLiftReport {
  // |h(β', β')| relative to the Euclidean size of β' in an h-orthonormal frame.
  double max_null;
  // |∇ʰ_{β'} β'| relative to the size of its two terms.
  double max_geodesic;
  std::size_t rows;
  // Rows skipped because the positions no longer resolve the motion or V is
  // below 1e-3.
  std::size_t unresolved;

  nlohmann::ordered_json to_json() const;
};

NullLiftReport null_lift_check(const StaticModel& model, const GeodesicTrace& trace);

struct STotalRow {
  double epsilon;
  double s;
  double t;
  double r;
};

struct STotalReport {
  std::string model;
  double r_start;
  int direction;
  bool conformal_end;
  std::vector<STotalRow> rows;
  double slope;     // log s against log ε
  bool divergent;   // slope within 0.1 of −1
  bool converged;   // s settles to a finite value
  double s_limit;

  nlohmann::ordered_json to_json() const;
};

// s along the radial geodesic from r_start in the given direction (±1) until
// V = ε (toward a zero of V), 1/V = ε (toward a conformal boundary), or t_cutoff.
STotalReport s_total(const StaticModel& model, double r_start, int direction, const std::vector<double>& epsilons,
                     double t_cutoff = 1e3, const GeodesicOptions& options = {});

}  // namespace staticlab
