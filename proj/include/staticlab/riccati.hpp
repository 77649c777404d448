#pragma once

// Shape operators of g̃-distance level sets along g̃-geodesics, their
// conversion to g-quantities, and the mean-curvature inequality checks.
//
// Along a unit-speed g̃-geodesic with parallel normal frame W, Ã obeys
//   Ã' = −Ã² − R̃(·, γ̇)γ̇
// and with ℓ = log V, ℓ̇ = dℓ/dt:
//   A = (Ã + ℓ̇ I)/V,  H = (H̃ + (n−1) ℓ̇)/V,  θ = H/V.
// The null expansion B of the lifted congruence in −V²dT² + g is integrated
// independently from the Lorentzian curvature.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "staticlab/geodesic.hpp"
#include "staticlab/linalg.hpp"

namespace staticlab {

struct ShapeOperatorState {
  std::string kind;     // "point" or "level_set"
  double rho0 = 0.0;    // distance from the centre (point initialization)
  GeodesicState point;  // where Ã is given
  // Orthonormal g̃-frame normal to the velocity; n components each.
  std::vector<std::vector<double>> frame;
  Matrix a_tilde;
};

// Tighter than the plain geodesic defaults, and the trace stops at V = 3e-2:
// θ carries a 1/V² and dθ/ds a 1/V⁴ amplification of integration error.
inline GeodesicOptions riccati_geodesic_defaults() {
  GeodesicOptions o;
  o.rtol = 1e-12;
  o.atol = 1e-14;
  o.v_floor = 3e-2;
  return o;
}

struct RiccatiOptions {
  double rho0 = 1e-3;
  // ‖Ã‖_max beyond which the trace stops at a focal point.
  double focal_norm = 1e6;
  GeodesicOptions geodesic = riccati_geodesic_defaults();
};

// Small geodesic sphere of radius rho0 about start.r: the geodesic is carried
// to distance rho0 and Ã = Id/ρ₀ − (ρ₀/3) R̃(·, γ̇)γ̇ there.
ShapeOperatorState init_shape_operator(const StaticModel& model, const GeodesicState& start, double rho0 = 1e-3,
                                       const GeodesicOptions& options = riccati_geodesic_defaults());

// Level set {r = const} crossed radially (direction ±1), with s0 assigned to
// the starting point.
ShapeOperatorState init_level_set(const StaticModel& model, double r, int direction, double s0 = 0.0);

// Mean curvature of {r = const} in g divided by V, for the unit normal
// direction·e_r.
double level_set_theta(const StaticModel& model, double r, int direction);

struct RiccatiRow {
  double t;
  double s;
  double r;
  double potential;
  double h_tilde;
  double h;
  double a_norm2;            // |A|²_g
  double theta;
  double dtheta_ds;          // numeric when resolved, otherwise analytic
  double dtheta_ds_analytic;
  bool numeric;
  double slack;              // −dθ/ds − θ²/(n−1)
  double traceless;          // |A − (H/(n−1)) Id|_g
  double null_expansion;     // B
  double dnull_ds;           // B′
  double null_energy;        // Ric_h(K, K)
};

struct RiccatiTrace {
  std::string model;
  int dim = 0;
  std::string init_kind;
  std::vector<RiccatiRow> rows;
  GeodesicStop stop = GeodesicStop::SpanEnd;
  bool focal = false;
  double max_asymmetry = 0.0;
  double max_frame_drift = 0.0;
  double max_fit_discrepancy = 0.0;  // numeric vs analytic dθ/ds (relative)

  std::string to_csv() const;
};

// Integrates geodesic, frame, Ã and the null Weingarten map jointly from init
// to the end of the trace. init must lie on the trace.
RiccatiTrace evolve_riccati(const StaticModel& model, const GeodesicTrace& trace, const ShapeOperatorState& init,
                            const RiccatiOptions& options = {});

struct InequalityReport {
  double min_slack;         // slack / max(1, θ²/(n−1))
  double min_slack_s;
  double min_intermediate;  // (−V² dθ/ds − |A|²) / max(1, |A|²)
  double min_intermediate_s;
  std::size_t rows;
  std::size_t analytic_rows;
  bool pass;

  nlohmann::ordered_json to_json() const;
};

InequalityReport check_inequality(const RiccatiTrace& trace, int n, double tol = 1e-6);

struct ComparisonReport {
  double max_excess;          // (θ − (n−1)/s) / max(1, θ) over rows with θ > 0
  double max_excess_s;
  double max_inverse_defect;  // violation of 1/θ(s₂) ≥ (s₂−s₁)/(n−1) + 1/θ(s₁)
  std::size_t rows_checked;
  bool pass;

  nlohmann::ordered_json to_json() const;
};

ComparisonReport check_comparison(const RiccatiTrace& trace, int n, double tol = 1e-6);

struct RaychaudhuriReport {
  double max_mismatch;     // |B − θ| / max(1, |θ|)
  double max_focusing;     // B′ + Ric_h(K,K) + B²/(n−1), relative
  double min_null_energy;
  double max_null_energy;
  bool pass;

  nlohmann::ordered_json to_json() const;
};

// Requires null_lift_check to pass on the trace (both maxima < 1e-7).
RaychaudhuriReport raychaudhuri_check(const StaticModel& model, const GeodesicTrace& trace,
                                      const RiccatiTrace& riccati, double tol = 1e-6);

// Equality case: |slack| and the traceless part of A both below tol.
bool equality_case(const RiccatiTrace& trace, int n, double tol = 1e-7);

nlohmann::ordered_json riccati_summary(const RiccatiTrace& trace, const InequalityReport& inequality,
                                       const ComparisonReport& comparison, std::size_t geodesic_index = 0);

struct SuiteOptions {
  std::size_t count = 100;
  std::uint64_t seed = 20240601;
  double t_end = 4.0;
  // Start radii are drawn from the inner part of the sample domain.
  double margin = 0.05;
  RiccatiOptions riccati;
};

struct SuiteResult {
  std::string model;
  std::size_t traces = 0;
  std::size_t focal = 0;
  double min_slack = 0.0;
  double min_intermediate = 0.0;
  double max_comparison_excess = 0.0;
  double max_inverse_defect = 0.0;
  bool inequality_pass = true;
  bool comparison_pass = true;
  // Null lift and Raychaudhuri checks over the same traces.
  double max_null = 0.0;
  double max_geodesic = 0.0;
  double max_raychaudhuri_mismatch = 0.0;
  bool raychaudhuri_pass = true;

  nlohmann::ordered_json to_json() const;
};

// Randomized non-radial geodesics with point-initialized Riccati traces.
SuiteResult inequality_suite(const StaticModel& model, const SuiteOptions& options = {},
                             Execution mode = Execution::Parallel);

}  // namespace staticlab
