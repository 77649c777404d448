#include "staticlab/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "staticlab/errors.hpp"

namespace staticlab {

Matrix Matrix::identity(int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double Matrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : a_) s += x * x;
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::abs(x));
  return m;
}

double Matrix::asymmetry() const {
  double m = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
  return m;
}

void Matrix::symmetrize() {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) {
      const double s = 0.5 * ((*this)(i, j) + (*this)(j, i));
      (*this)(i, j) = s;
      (*this)(j, i) = s;
    }
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix c = a;
  for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] += b.a_[i];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix c = a;
  for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
  return c;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  const int n = a.n_;
  Matrix c(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (double& x : c.a_) x *= s;
  return c;
}

std::vector<double> symmetric_eigenvalues(Matrix a, double tol, int max_sweeps) {
  const int n = a.dim();
  a.symmetrize();
  const double scale = std::max(1.0, a.max_abs());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= tol * scale) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<double> solve(Matrix a, std::vector<double> b) {
  const int n = a.dim();
  const double scale = std::max(a.max_abs(), 1e-300);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) <= 1e-14 * scale) fail(ErrorCode::Precondition, "singular linear system");
    if (piv != col) {
      for (int k = 0; k < n; ++k) std::swap(a(col, k), a(piv, k));
      std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(piv)]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (int k = col; k < n; ++k) a(r, k) -= f * a(col, k);
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int r = n - 1; r >= 0; --r) {
    double v = b[static_cast<std::size_t>(r)];
    for (int k = r + 1; k < n; ++k) v -= a(r, k) * x[static_cast<std::size_t>(k)];
    x[static_cast<std::size_t>(r)] = v / a(r, r);
  }
  return x;
}

std::vector<double> polyfit_derivatives(std::span<const double> xs, std::span<const double> ys, double x0, int degree,
                                        int max_order) {
  const int m = degree + 1;
  double span = 0.0;
  for (double x : xs) span = std::max(span, std::abs(x - x0));
  if (!(span > 0.0)) fail(ErrorCode::Precondition, "fit window has zero width");
  Matrix ata(m);
  std::vector<double> atb(static_cast<std::size_t>(m), 0.0);
  std::vector<double> pw(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double u = (xs[i] - x0) / span;
    pw[0] = 1.0;
    for (int k = 1; k < m; ++k) pw[static_cast<std::size_t>(k)] = pw[static_cast<std::size_t>(k - 1)] * u;
    for (int p = 0; p < m; ++p) {
      atb[static_cast<std::size_t>(p)] += pw[static_cast<std::size_t>(p)] * ys[i];
      for (int q = 0; q < m; ++q) ata(p, q) += pw[static_cast<std::size_t>(p)] * pw[static_cast<std::size_t>(q)];
    }
  }
  const std::vector<double> c = solve(ata, atb);
  std::vector<double> d(static_cast<std::size_t>(max_order + 1), 0.0);
  double fact = 1.0, scale = 1.0;
  for (int k = 0; k <= max_order && k < m; ++k) {
    if (k > 0) {
      fact *= k;
      scale *= span;
    }
    d[static_cast<std::size_t>(k)] = fact * c[static_cast<std::size_t>(k)] / scale;
  }
  return d;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

}  // namespace staticlab
