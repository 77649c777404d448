#include "staticlab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "staticlab/errors.hpp"
#include "staticlab/grid.hpp"
#include "staticlab/report.hpp"

namespace staticlab {

std::string to_string(FiberKind kind) {
  switch (kind) {
    case FiberKind::Sphere: return "sphere";
    case FiberKind::Flat: return "flat";
    case FiberKind::Hyperbolic: return "hyperbolic";
    case FiberKind::Einstein: return "einstein";
  }
  return "?";
}

FiberKind fiber_kind_from_string(const std::string& name) {
  if (name == "sphere") return FiberKind::Sphere;
  if (name == "flat") return FiberKind::Flat;
  if (name == "hyperbolic") return FiberKind::Hyperbolic;
  if (name == "einstein") return FiberKind::Einstein;
  fail(ErrorCode::Parse, "unknown fiber kind '" + name + "'");
}

FiberBlock FiberBlock::constant_curvature(int dim, FiberKind kind) {
  if (dim < 1) fail(ErrorCode::Parameter, "fiber dimension must be positive");
  if (kind == FiberKind::Einstein) fail(ErrorCode::Parameter, "use FiberBlock::einstein for Einstein fibers");
  const double kappa = kind == FiberKind::Sphere ? 1.0 : kind == FiberKind::Hyperbolic ? -1.0 : 0.0;
  if (dim == 1 && kappa != 0.0) fail(ErrorCode::Parameter, "a one-dimensional fiber must be flat");
  return {dim, kind, kappa, (dim - 1) * kappa};
}

FiberBlock FiberBlock::einstein(int dim, double lambda) {
  if (dim < 1) fail(ErrorCode::Parameter, "fiber dimension must be positive");
  if (!std::isfinite(lambda)) fail(ErrorCode::Parameter, "Einstein constant must be finite");
  if (dim == 1 && lambda != 0.0) fail(ErrorCode::Parameter, "a one-dimensional fiber must be flat");
  return {dim, FiberKind::Einstein, std::numeric_limits<double>::quiet_NaN(), lambda};
}

double FiberBlock::sectional() const {
  if (!has_riemann()) fail(ErrorCode::Unsupported, "Einstein fiber block exposes only its Ricci tensor");
  return kappa_;
}

double FiberBlock::ricci() const { return lambda_; }

RadialMetric::RadialMetric(Interval domain, Profile lapse, std::vector<WarpedBlock> blocks)
    : domain_(domain), lapse_(std::move(lapse)), blocks_(std::move(blocks)) {
  if (!(domain_.lo < domain_.hi)) fail(ErrorCode::Parameter, "metric domain must be a non-empty interval");
  n_ = 1;
  for (const auto& b : blocks_) {
    offsets_.push_back(n_);
    n_ += b.fiber.dim();
  }
  if (n_ > 16) fail(ErrorCode::Parameter, "total dimension above 16 is not supported");
}

std::size_t RadialMetric::block_of(int i) const {
  for (std::size_t j = blocks_.size(); j-- > 0;) {
    if (i >= offsets_[j]) return j;
  }
  fail(ErrorCode::Parameter, "frame index 0 is radial");
}

DerivativeSource RadialMetric::derivative_source() const {
  if (lapse_.derivative_source() == DerivativeSource::FiniteDifference) return DerivativeSource::FiniteDifference;
  for (const auto& b : blocks_) {
    if (b.warp.derivative_source() == DerivativeSource::FiniteDifference) return DerivativeSource::FiniteDifference;
  }
  return DerivativeSource::ClosedForm;
}

RadialMetric RadialMetric::restricted(Interval sub) const {
  if (sub.lo < domain_.lo || sub.hi > domain_.hi) fail(ErrorCode::Domain, "subdomain exceeds metric domain");
  return {sub, lapse_, blocks_};
}

RadialMetric RadialMetric::with_finite_differences() const {
  std::vector<WarpedBlock> blocks;
  for (const auto& b : blocks_) blocks.push_back({b.fiber, b.warp.with_finite_differences()});
  return {domain_, lapse_.with_finite_differences(), std::move(blocks)};
}

void RadialMetric::require_interior(double r) const {
  if (!domain_.contains_open(r)) {
    fail(ErrorCode::Domain, "radial coordinate " + format_double(r) + " outside (" +
                                format_double(domain_.lo) + ", " + format_double(domain_.hi) + ")");
  }
}

WarpedData warped_data(const RadialMetric& metric, double r) {
  metric.require_interior(r);
  WarpedData d;
  d.r = r;
  d.a = metric.lapse().jet(r);
  if (!(d.a.value() > 0.0) || !std::isfinite(d.a.value())) {
    fail(ErrorCode::DegenerateMetric, "lapse not positive at r = " + format_double(r));
  }
  const double a = d.a[0], a1 = d.a[1];
  for (const auto& blk : metric.blocks()) {
    const Jet b = blk.warp.jet(r);
    if (!(b.value() > 0.0) || !std::isfinite(b.value())) {
      fail(ErrorCode::DegenerateMetric, "warp not positive at r = " + format_double(r));
    }
    d.b.push_back(b);
    d.log_warp.push_back(b[1] / (a * b[0]));
    d.warp_accel.push_back((b[2] * a - b[1] * a1) / (a * a * a * b[0]));
  }
  return d;
}

namespace {

std::size_t idx4(int n, int i, int j, int k, int l) {
  return static_cast<std::size_t>(((i * n + j) * n + k) * n + l);
}

// Sectional curvature of the plane e_i ∧ e_j (i ≠ j).
double sectional(const RadialMetric& m, const WarpedData& d, int i, int j) {
  if (i > j) std::swap(i, j);
  if (i == 0) return -d.warp_accel[m.block_of(j)];
  const std::size_t bi = m.block_of(i), bj = m.block_of(j);
  if (bi != bj) return -d.log_warp[bi] * d.log_warp[bj];
  const double fprime = d.b[bi][1] / d.a[0];
  const double f = d.b[bi][0];
  return (m.blocks()[bi].fiber.sectional() - fprime * fprime) / (f * f);
}

void fill_christoffel(const RadialMetric& m, const WarpedData& d, std::vector<double>& g) {
  const int n = m.dim();
  std::fill(g.begin(), g.end(), 0.0);
  auto at = [n, &g](int k, int i, int j) -> double& { return g[static_cast<std::size_t>((k * n + i) * n + j)]; };
  const double a = d.a[0], a1 = d.a[1];
  at(0, 0, 0) = a1 / a;
  for (std::size_t j = 0; j < m.blocks().size(); ++j) {
    const double b = d.b[j][0], b1 = d.b[j][1];
    const int off = m.block_offset(j);
    for (int x = off; x < off + m.blocks()[j].fiber.dim(); ++x) {
      at(0, x, x) = -b * b1 / (a * a);
      at(x, 0, x) = b1 / b;
      at(x, x, 0) = b1 / b;
    }
  }
}

double end_distance(const RadialMetric& m, double r) {
  return std::min(r - m.domain().lo, m.domain().hi - r);
}

// 1e-5 max(1, |r|), reduced near a finite domain end where the Christoffel
// symbols typically grow like 1/distance.
double christoffel_step(const RadialMetric& m, double r) {
  return std::min(1e-5 * std::max(1.0, std::abs(r)), 5e-4 * end_distance(m, r));
}

}  // namespace

TensorAtPoint christoffel(const RadialMetric& metric, double r) {
  const WarpedData d = warped_data(metric, r);
  TensorAtPoint t(r, metric.dim());
  fill_christoffel(metric, d, t.gamma_);
  return t;
}

struct CurvatureBuilder {
  static void closed_form(const RadialMetric& m, const WarpedData& d, TensorAtPoint& t) {
    const int n = m.dim();
    fill_christoffel(m, d, t.gamma_);
    bool riemann_known = true;
    for (const auto& b : m.blocks()) riemann_known = riemann_known && b.fiber.has_riemann();
    if (riemann_known) {
      std::vector<double> rm(static_cast<std::size_t>(n * n * n * n), 0.0);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          const double k = sectional(m, d, i, j);
          rm[idx4(n, i, j, j, i)] = k;
          rm[idx4(n, i, j, i, j)] = -k;
        }
      }
      t.riemann_ = std::move(rm);
    }
    t.ricci_.assign(static_cast<std::size_t>(n * n), 0.0);
    double ric00 = 0.0;
    for (std::size_t j = 0; j < m.blocks().size(); ++j) {
      ric00 -= m.blocks()[j].fiber.dim() * d.warp_accel[j];
    }
    t.ricci_[0] = ric00;
    double scalar = ric00;
    for (std::size_t j = 0; j < m.blocks().size(); ++j) {
      const auto& fiber = m.blocks()[j].fiber;
      const double fprime = d.b[j][1] / d.a[0];
      const double f = d.b[j][0];
      double value = -d.warp_accel[j] + (fiber.ricci() - (fiber.dim() - 1) * fprime * fprime) / (f * f);
      for (std::size_t k = 0; k < m.blocks().size(); ++k) {
        if (k != j) value -= m.blocks()[k].fiber.dim() * d.log_warp[j] * d.log_warp[k];
      }
      const int off = m.block_offset(j);
      for (int x = off; x < off + fiber.dim(); ++x) t.ricci_[static_cast<std::size_t>(x * n + x)] = value;
      scalar += fiber.dim() * value;
    }
    t.scalar_ = scalar;
  }

  // Coordinate Riemann tensor from Christoffel symbols, radial derivatives by
  // a fourth-order central stencil of step h, fiber derivatives from the
  // normal-coordinate expansion of the (constant-curvature) fiber metric.
  static std::vector<double> coordinate_riemann(const RadialMetric& m, double r, double h,
                                                std::vector<double>* radial_derivative) {
    const int n = m.dim();
    const std::size_t n3 = static_cast<std::size_t>(n * n * n);
    std::vector<double> g0(n3), gm2(n3), gm1(n3), gp1(n3), gp2(n3);
    fill_christoffel(m, warped_data(m, r), g0);
    fill_christoffel(m, warped_data(m, r - 2 * h), gm2);
    fill_christoffel(m, warped_data(m, r - h), gm1);
    fill_christoffel(m, warped_data(m, r + h), gp1);
    fill_christoffel(m, warped_data(m, r + 2 * h), gp2);
    std::vector<double> dr(n3);
    for (std::size_t q = 0; q < n3; ++q) dr[q] = (gm2[q] - 8 * gm1[q] + 8 * gp1[q] - gp2[q]) / (12 * h);
    if (radial_derivative) *radial_derivative = dr;

    // dG[w][k][i][j] = ∂_w Γ^k_{ij}
    std::vector<double> dG(static_cast<std::size_t>(n) * n3, 0.0);
    for (std::size_t q = 0; q < n3; ++q) dG[q] = dr[q];
    for (std::size_t blk = 0; blk < m.blocks().size(); ++blk) {
      const auto& fiber = m.blocks()[blk].fiber;
      const int dim = fiber.dim();
      // Ricci-equivalent constant-curvature surrogate for Einstein fibers.
      const double kappa =
          fiber.has_riemann() ? fiber.sectional() : (dim > 1 ? fiber.ricci() / (dim - 1) : 0.0);
      if (kappa == 0.0) continue;
      auto delta = [](int p, int q) { return p == q ? 1.0 : 0.0; };
      // ∂_c ∂_d g_ab at the centre of normal coordinates.
      auto d2 = [&](int a, int b, int c, int d) {
        return -(kappa / 3.0) * (2 * delta(c, d) * delta(a, b) - delta(a, c) * delta(b, d) - delta(a, d) * delta(b, c));
      };
      const int off = m.block_offset(blk);
      for (int w = 0; w < dim; ++w) {
        for (int k = 0; k < dim; ++k) {
          for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
              const double v = 0.5 * (d2(k, j, i, w) + d2(k, i, j, w) - d2(i, j, k, w));
              dG[static_cast<std::size_t>(((off + w) * n + off + k) * n + off + i) * n + off + j] = v;
            }
          }
        }
      }
    }

    auto G = [&](int k, int i, int j) { return g0[static_cast<std::size_t>((k * n + i) * n + j)]; };
    auto D = [&](int w, int k, int i, int j) { return dG[static_cast<std::size_t>(((w * n + k) * n + i) * n + j)]; };
    // R^l_{ijk}
    std::vector<double> up(static_cast<std::size_t>(n * n * n * n), 0.0);
    for (int l = 0; l < n; ++l) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            double v = D(i, l, j, k) - D(j, l, i, k);
            for (int q = 0; q < n; ++q) v += G(l, i, q) * G(q, j, k) - G(l, j, q) * G(q, i, k);
            up[idx4(n, i, j, k, l)] = v;
          }
        }
      }
    }
    return up;
  }

  static void from_christoffel(const RadialMetric& m, double r, TensorAtPoint& t, bool want_riemann) {
    const int n = m.dim();
    const WarpedData d = warped_data(m, r);
    const double h = christoffel_step(m, r);
    std::vector<double> drh, dr2h;
    const std::vector<double> up = coordinate_riemann(m, r, h, &drh);
    coordinate_riemann(m, r, 2 * h, &dr2h);
    double spread = 0.0;
    for (std::size_t q = 0; q < drh.size(); ++q) spread = std::max(spread, std::abs(drh[q] - dr2h[q]));
    t.richardson_ = spread;

    std::vector<double> scale(static_cast<std::size_t>(n));
    scale[0] = d.a[0];
    for (std::size_t j = 0; j < m.blocks().size(); ++j) {
      for (int x = m.block_offset(j); x < m.block_offset(j) + m.blocks()[j].fiber.dim(); ++x) {
        scale[static_cast<std::size_t>(x)] = d.b[j][0];
      }
    }
    // Lower with the diagonal metric and normalize to the orthonormal frame.
    std::vector<double> rm(static_cast<std::size_t>(n * n * n * n), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const double sl = scale[static_cast<std::size_t>(l)];
            const double s = scale[static_cast<std::size_t>(i)] * scale[static_cast<std::size_t>(j)] *
                             scale[static_cast<std::size_t>(k)] * sl;
            rm[idx4(n, i, j, k, l)] = up[idx4(n, i, j, k, l)] * sl * sl / s;
          }
    t.ricci_.assign(static_cast<std::size_t>(n * n), 0.0);
    double scalar = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double v = 0.0;
        for (int i = 0; i < n; ++i) v += rm[idx4(n, i, j, k, i)];
        t.ricci_[static_cast<std::size_t>(j * n + k)] = v;
      }
      scalar += t.ricci_[static_cast<std::size_t>(j * n + j)];
    }
    t.scalar_ = scalar;
    fill_christoffel(m, d, t.gamma_);
    if (want_riemann) t.riemann_ = std::move(rm);
  }

  static void record_cross_check(TensorAtPoint& t, double discrepancy, double spread) {
    t.discrepancy_ = discrepancy;
    t.richardson_ = spread;
  }
};

double TensorAtPoint::riemann(int i, int j, int k, int l) const {
  if (!riemann_) fail(ErrorCode::Unsupported, "Riemann tensor requires constant-curvature fibers");
  return (*riemann_)[idx4(n_, i, j, k, l)];
}

TensorAtPoint curvature_from_christoffel(const RadialMetric& metric, double r) {
  bool riemann_known = true;
  for (const auto& b : metric.blocks()) riemann_known = riemann_known && b.fiber.has_riemann();
  TensorAtPoint t(r, metric.dim());
  CurvatureBuilder::from_christoffel(metric, r, t, riemann_known);
  return t;
}

TensorAtPoint curvature(const RadialMetric& metric, double r, const CurvatureOptions& options) {
  const WarpedData d = warped_data(metric, r);
  TensorAtPoint t(r, metric.dim());
  CurvatureBuilder::closed_form(metric, d, t);
  if (!options.cross_check) return t;

  const TensorAtPoint fd = curvature_from_christoffel(metric, r);
  const int n = metric.dim();
  double worst = 0.0, scale = 1.0, worst_closed = 0.0, worst_fd = 0.0;
  auto consider = [&](double closed, double other) {
    scale = std::max(scale, std::abs(closed));
    const double diff = std::abs(closed - other);
    if (diff > worst) {
      worst = diff;
      worst_closed = closed;
      worst_fd = other;
    }
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) consider(t.ricci(i, j), fd.ricci(i, j));
  consider(t.scalar(), fd.scalar());
  if (t.has_riemann() && fd.has_riemann()) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) consider(t.riemann(i, j, k, l), fd.riemann(i, j, k, l));
  }
  CurvatureBuilder::record_cross_check(t, worst, fd.richardson_spread());
  if (worst > options.tolerance * scale) {
    throw InconsistencyError("curvature paths disagree by " + format_double(worst) + " at r = " + format_double(r),
                             worst_closed, worst_fd);
  }
  return t;
}

double jacobi_form(const RadialMetric& metric, const WarpedData& data, std::span<const double> x,
                   std::span<const double> u, std::span<const double> y) {
  const int n = metric.dim();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      const double weight = x[ui] * u[uj] * u[uj] * y[ui] - x[ui] * u[uj] * u[ui] * y[uj];
      if (weight == 0.0) continue;
      total += sectional(metric, data, i, j) * weight;
    }
  }
  return total;
}

RadialMetric conformal_metric(const RadialMetric& metric, const Profile& potential, std::optional<Interval> subdomain) {
  const Interval dom = subdomain.value_or(metric.domain());
  for (double r : probe_points(dom)) {
    const double v = potential(r);
    if (!(v > 0.0)) {
      fail(ErrorCode::PotentialSign, "potential not positive at r = " + format_double(r));
    }
  }
  std::vector<WarpedBlock> blocks;
  for (const auto& b : metric.blocks()) blocks.push_back({b.fiber, b.warp / potential});
  return {dom, metric.lapse() / potential, std::move(blocks)};
}

double contracted_bianchi_defect(const RadialMetric& metric, double r) {
  const WarpedData d = warped_data(metric, r);
  const double h = std::min(1e-4 * std::max(1.0, std::abs(r)), 0.1 * end_distance(metric, r));
  auto closed = [&](double x) {
    TensorAtPoint t(x, metric.dim());
    CurvatureBuilder::closed_form(metric, warped_data(metric, x), t);
    return t;
  };
  const TensorAtPoint c = closed(r);
  const TensorAtPoint m2 = closed(r - 2 * h), m1 = closed(r - h), p1 = closed(r + h), p2 = closed(r + 2 * h);
  auto deriv = [&](double f_m2, double f_m1, double f_p1, double f_p2) {
    return (f_m2 - 8 * f_m1 + 8 * f_p1 - f_p2) / (12 * h) / d.a[0];
  };
  const double dR = deriv(m2.scalar(), m1.scalar(), p1.scalar(), p2.scalar());
  double div = deriv(m2.ricci(0, 0), m1.ricci(0, 0), p1.ricci(0, 0), p2.ricci(0, 0));
  for (std::size_t j = 0; j < metric.blocks().size(); ++j) {
    const int x = metric.block_offset(j);
    div += metric.blocks()[j].fiber.dim() * d.log_warp[j] * (c.ricci(0, 0) - c.ricci(x, x));
  }
  return std::abs(dR - 2.0 * div);
}

}  // namespace staticlab
