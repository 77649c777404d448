#pragma once

// The operator
//   Lφ = V⁻² [Δ̃φ + (n−1) V⁻¹ g̃(∇̃V, ∇̃φ)],   g̃ = g/V²,
// on radial functions, superharmonicity of the g̃-distance to a conformal
// end, and convexity of the level sets of V near an end.

#include <string>
#include <vector>

#include "json.hpp"
#include "staticlab/parallel.hpp"
#include "staticlab/riccati.hpp"
#include "staticlab/static_check.hpp"

namespace staticlab {

enum class RadialKind { PointDistance, LevelSetDistance, EndDistance, Custom };
std::string to_string(RadialKind kind);

struct RadialFunction {
  RadialKind kind = RadialKind::Custom;
  Profile phi;
  Interval domain;
};

RadialFunction custom_function(Profile phi, Interval domain);

// φ(r) = direction · g̃-length of [anchor, r]. PointDistance when every warp
// vanishes at the anchor.
RadialFunction conformal_distance(const StaticModel& model, double anchor, int direction = 1);

// g̃-distance to the radial end `end` (finite or ±∞). Requires a conformal
// boundary there.
RadialFunction end_distance(const StaticModel& model, double end);

// max | |∇̃φ|_g̃ − 1 | over the grid.
double gradient_defect(const StaticModel& model, const RadialFunction& phi, const std::vector<double>& grid);

std::vector<double> L_apply(const StaticModel& model, const RadialFunction& phi, const std::vector<double>& grid,
                            Execution mode = Execution::Parallel);

// Throws Precondition unless g/V² has a conformal boundary at `end`: ε ≤ 0
// and V unbounded toward the end.
void require_compactifiable(const StaticModel& model, double end);

// ∫ V·a dr over [from, to], the affine length of the lifted null geodesic.
double affine_length(const StaticModel& model, double from, double to);

// Radius on the way from `from` toward `end` where V first reaches `level`.
double level_radius_toward(const StaticModel& model, double from, double end, double level);

inline std::vector<double> default_epsilons() { return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}; }

struct SuperharmonicityRow {
  double r;
  double lu;
  double s;      // affine length from r to {V = 1/ε_min}
  double bound;  // (n−1)/s
};

struct SuperharmonicityReport {
  std::string model;
  double end = 0.0;
  std::vector<SuperharmonicityRow> rows;
  std::vector<double> epsilons;
  std::vector<double> level_radii;  // {Ṽ = ε}
  std::vector<double> s_of_eps;     // affine length from the innermost grid point
  double slope = 0.0;               // least-squares d log s / d log ε
  double min_neg_lu = 0.0;
  double max_bound_excess = 0.0;    // max over rows and ε of Lu − (n−1)/s, relative

  bool pass(double tol = 1e-6) const;
  nlohmann::ordered_json to_json(bool include_rows = false) const;
};

SuperharmonicityReport superharmonicity_check(const StaticModel& model, double end, const std::vector<double>& grid,
                                              const std::vector<double>& epsilons = default_epsilons(),
                                              Execution mode = Execution::Parallel);

struct ConvexityLevel {
  double epsilon;
  double potential;  // V on the level set
  double r;
  double min_eigenvalue;
  double max_eigenvalue;
};

struct ConvexityReport {
  std::string model;
  double end = 0.0;
  // "potential_zero" for levels {V = ε}, "conformal" for {1/V = ε}.
  std::string kind;
  std::vector<ConvexityLevel> levels;
  double min_eigenvalue = 0.0;

  bool pass(double tol = 1e-10) const { return min_eigenvalue >= -tol; }
  nlohmann::ordered_json to_json() const;
};

// Shape operator of the level set in g̃ with normal toward the end, in a
// g̃-orthonormal frame: Ã = V·A − ∂V/∂ν.
ConvexityReport boundary_convexity(const StaticModel& model, double end,
                                   const std::vector<double>& epsilons = default_epsilons(),
                                   Execution mode = Execution::Parallel);

struct ConsistencyReport {
  double max_mismatch = 0.0;  // |Lφ − θ| / max(1, |θ|)
  std::size_t rows = 0;

  bool pass(double tol = 1e-6) const { return rows > 0 && max_mismatch < tol; }
  nlohmann::ordered_json to_json() const;
};

// Compares Lφ with θ on the rows of a radial Riccati trace that lie in the
// domain of φ.
ConsistencyReport theta_consistency(const StaticModel& model, const RadialFunction& phi, const RiccatiTrace& trace,
                                    double margin = 1e-3);

struct BoundarySuite {
  SuperharmonicityReport superharmonicity;
  ConvexityReport convexity;

  bool pass() const { return superharmonicity.pass() && convexity.pass(); }
  nlohmann::ordered_json to_json() const;
};

BoundarySuite boundary_suite(const StaticModel& model, double end, int grid_points = 200,
                             Execution mode = Execution::Parallel);

}  // namespace staticlab
