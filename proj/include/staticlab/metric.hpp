#pragma once

// Multiply-warped radial metrics
//
//   g = a(r)^2 dr^2 + sum_j b_j(r)^2 g_j
//
// where each fiber (F_j, g_j) has constant curvature or is Einstein. Fiber
// coordinates are never instantiated: Christoffel symbols are reported in the
// chart (r, fiber normal coordinates centred at the evaluation point) and
// curvature in the orthonormal frame e_0 = a^{-1} d_r, e_{j,k} = b_j^{-1} e^j_k.
// Frame index 0 is radial; block j occupies a contiguous index range.

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "staticlab/profile.hpp"

namespace staticlab {

enum class FiberKind { Sphere, Flat, Hyperbolic, Einstein };

std::string to_string(FiberKind kind);
FiberKind fiber_kind_from_string(const std::string& name);

class FiberBlock {
 public:
  // Constant-curvature block (sphere κ=+1, flat κ=0, hyperbolic κ=−1).
  static FiberBlock constant_curvature(int dim, FiberKind kind);
  // Einstein block with Ric = lambda * g_fiber. Only the fiber Ricci is known.
  static FiberBlock einstein(int dim, double lambda);

  int dim() const { return dim_; }
  FiberKind kind() const { return kind_; }
  bool has_riemann() const { return kind_ != FiberKind::Einstein; }
  // Sectional curvature κ; throws Unsupported for Einstein blocks.
  double sectional() const;
  // Fiber Ricci constant: (dim − 1)κ or λ.
  double ricci() const;

 private:
  FiberBlock(int dim, FiberKind kind, double kappa, double lambda)
      : dim_(dim), kind_(kind), kappa_(kappa), lambda_(lambda) {}
  int dim_;
  FiberKind kind_;
  double kappa_;
  double lambda_;
};

struct WarpedBlock {
  FiberBlock fiber;
  Profile warp;
};

struct Interval {
  double lo;
  double hi;
  double length() const { return hi - lo; }
  bool contains_open(double r) const { return r > lo && r < hi; }
};

class RadialMetric {
 public:
  RadialMetric(Interval domain, Profile lapse, std::vector<WarpedBlock> blocks);

  int dim() const { return n_; }
  const Interval& domain() const { return domain_; }
  const Profile& lapse() const { return lapse_; }
  const std::vector<WarpedBlock>& blocks() const { return blocks_; }
  // First frame index of block j.
  int block_offset(std::size_t j) const { return offsets_[j]; }
  // Block owning frame index i ≥ 1.
  std::size_t block_of(int i) const;
  DerivativeSource derivative_source() const;

  RadialMetric restricted(Interval sub) const;
  RadialMetric with_finite_differences() const;

  // Throws Domain when r is not strictly inside the domain.
  void require_interior(double r) const;

 private:
  Interval domain_;
  Profile lapse_;
  std::vector<WarpedBlock> blocks_;
  std::vector<int> offsets_;
  int n_;
};

// Profile values and the warped-product coefficients derived from them at r.
// With arclength l (dl = a dr) and f_j = b_j(l):
//   log_warp[j]   = f_j'/f_j
//   warp_accel[j] = f_j''/f_j
struct WarpedData {
  double r = 0;
  Jet a;
  std::vector<Jet> b;
  std::vector<double> log_warp;
  std::vector<double> warp_accel;
};

WarpedData warped_data(const RadialMetric& metric, double r);

class TensorAtPoint {
 public:
  TensorAtPoint(double r, int n) : r_(r), n_(n), gamma_(static_cast<std::size_t>(n * n * n), 0.0) {}

  double r() const { return r_; }
  int dim() const { return n_; }

  // Γ^k_{ij} in the chart (r, fiber normal coordinates).
  double christoffel(int k, int i, int j) const { return gamma_[idx3(k, i, j)]; }
  double& christoffel(int k, int i, int j) { return gamma_[idx3(k, i, j)]; }
  std::span<const double> christoffel_data() const { return gamma_; }

  bool has_riemann() const { return riemann_.has_value(); }
  // R_{ijkl} = g(R(e_i, e_j) e_k, e_l); sectional curvature K(e_i, e_j) = R_{ijji}.
  // Throws Unsupported when a block only exposes its Ricci tensor.
  double riemann(int i, int j, int k, int l) const;
  double ricci(int i, int j) const { return ricci_[static_cast<std::size_t>(i * n_ + j)]; }
  double scalar() const { return scalar_; }

  // Largest discrepancy between the closed-form and finite-difference paths
  // (NaN if the second path was not evaluated) and the doubled-step
  // Richardson spread of the finite-difference path.
  double cross_path_discrepancy() const { return discrepancy_; }
  double richardson_spread() const { return richardson_; }

 private:
  friend TensorAtPoint christoffel(const RadialMetric&, double);
  friend struct CurvatureBuilder;

  std::size_t idx3(int k, int i, int j) const { return static_cast<std::size_t>((k * n_ + i) * n_ + j); }

  double r_;
  int n_;
  std::vector<double> gamma_;
  std::optional<std::vector<double>> riemann_;
  std::vector<double> ricci_;
  double scalar_ = 0.0;
  double discrepancy_ = std::numeric_limits<double>::quiet_NaN();
  double richardson_ = std::numeric_limits<double>::quiet_NaN();
};

TensorAtPoint christoffel(const RadialMetric& metric, double r);

struct CurvatureOptions {
  bool cross_check = true;
  // Discrepancy allowed between paths, relative to max(1, |curvature|).
  double tolerance = 1e-6;
};

// Closed-form multiply-warped curvature, cross-validated against curvature
// assembled from finite differences of the Christoffel symbols.
TensorAtPoint curvature(const RadialMetric& metric, double r, const CurvatureOptions& options = {});

// Curvature of the same metric computed only from finite differences of the
// Christoffel symbols (the second path of `curvature`).
TensorAtPoint curvature_from_christoffel(const RadialMetric& metric, double r);

// R(X, u, u, Y) in the orthonormal frame for the given frame vectors.
double jacobi_form(const RadialMetric& metric, const WarpedData& data, std::span<const double> x,
                   std::span<const double> u, std::span<const double> y);

// g/V^2 with a → a/V, b_j → b_j/V. The potential must be positive on the
// (optionally restricted) domain.
RadialMetric conformal_metric(const RadialMetric& metric, const Profile& potential,
                              std::optional<Interval> subdomain = std::nullopt);

// |dR/dl − 2 div(Ric)(e_0)| from the contracted second Bianchi identity.
double contracted_bianchi_defect(const RadialMetric& metric, double r);

}  // namespace staticlab
