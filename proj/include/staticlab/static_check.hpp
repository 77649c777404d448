#pragma once

// Static and sub-static residuals of a triple (M, g, V):
//   S = V Ric + (ΔV) g − ∇²V
// together with the trace-normalized system, the conformal form in g/V², the
// constancy of scalar curvature and the behaviour of V at its zero set.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "staticlab/linalg.hpp"
#include "staticlab/metric.hpp"
#include "staticlab/parallel.hpp"

namespace staticlab {

struct StaticModel {
  std::string name;
  RadialMetric metric;
  Profile potential;
  // Scalar normalization R = ε n (n − 1).
  int epsilon = 0;
  // Radial values where V vanishes.
  std::vector<double> boundary_locus;
  // Bounded interval used for sample grids when the domain is unbounded.
  std::optional<Interval> sample_domain;

  int dim() const { return metric.dim(); }
  Interval grid_domain() const;
};

// Validates ε ∈ {−1, 0, 1} and V > 0 across the domain.
void validate_model(const StaticModel& model);

struct ResidualRow {
  double r;
  double sup_norm;
  double min_eigenvalue;
};

struct ResidualReport {
  std::string model;
  std::string equation;
  std::vector<double> grid;
  double sup_norm = 0.0;
  double min_eigenvalue = 0.0;
  std::vector<ResidualRow> per_point;

  nlohmann::ordered_json to_json(bool include_rows = false) const;
  std::string to_csv() const;
};

struct CheckOptions {
  bool cross_check = true;
  Execution execution = Execution::Parallel;
};

// Frame components of ∇²V for a radial potential.
Matrix radial_hessian(const RadialMetric& metric, const TensorAtPoint& gamma, const Jet& v);

// S at r in the orthonormal frame.
Matrix static_tensor(const StaticModel& model, double r, bool cross_check = true);

ResidualReport static_residual(const StaticModel& model, const std::vector<double>& grid,
                               const CheckOptions& options = {});

struct TraceSystemReport {
  ResidualReport tensor;     // V(Ric − nεg) − ∇²V
  ResidualReport laplacian;  // ΔV + nεV
  double scalar_deviation;   // max |R − εn(n−1)|
  double static_sup_norm;

  // Both sides of "trace system small ⇔ static residual small and R
  // normalized" evaluated at the given tolerance.
  bool trace_small(double tol) const { return tensor.sup_norm < tol && laplacian.sup_norm < tol; }
  bool static_small(double tol) const { return static_sup_norm < tol && scalar_deviation < tol; }
  bool equivalent(double tol) const { return trace_small(tol) == static_small(tol); }
};

TraceSystemReport trace_system_residual(const StaticModel& model, const std::vector<double>& grid,
                                        const CheckOptions& options = {});

// Same tensor as static_residual; min_eigenvalue ≥ −tol classifies sub-static.
ResidualReport substatic_min_eigenvalue(const StaticModel& model, const std::vector<double>& grid,
                                        const CheckOptions& options = {});
bool is_substatic(const ResidualReport& report, double tol = 1e-8);

// Ṽ Ric̃ + (n−1) ∇̃²Ṽ with g̃ = g/V², Ṽ = 1/V, in the g̃-orthonormal frame.
Matrix conformal_static_tensor(const StaticModel& model, const RadialMetric& conformal, const Profile& inverse_potential,
                               double r, bool cross_check = true);
ResidualReport conformal_static_residual(const StaticModel& model, const std::vector<double>& grid,
                                         const CheckOptions& options = {});

// max |R(r) − R(r_0)| over the grid (r_0 = first grid point).
double scalar_constancy(const StaticModel& model, const std::vector<double>& grid);

struct LevelSetRow {
  double epsilon;
  double r;
  double second_fundamental_form;  // Frobenius norm of A in g
};

struct BoundaryPropertiesReport {
  double r_boundary;
  double gradient_norm;  // |∇V|_g extrapolated to the zero set
  std::vector<LevelSetRow> rows;
  bool monotone;         // |A| non-increasing as ε decreases
  double decay_slope;    // log–log slope of |A| against ε
  double extrapolated_limit;

  nlohmann::ordered_json to_json() const;
};

BoundaryPropertiesReport boundary_properties(const StaticModel& model, double r_boundary,
                                             const std::vector<double>& epsilons);

// r strictly inside the domain where V = level, found by bisection from the
// boundary end toward the interior.
double level_set_radius(const StaticModel& model, double r_boundary, double level);

}  // namespace staticlab
