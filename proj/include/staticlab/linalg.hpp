#pragma once

#include <span>
#include <vector>

namespace staticlab {

// Dense row-major square matrix; dimensions here never exceed 16.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n, double fill = 0.0) : n_(n), a_(static_cast<std::size_t>(n * n), fill) {}
  static Matrix identity(int n);

  int dim() const { return n_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * n_ + j)]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * n_ + j)]; }
  std::span<double> data() { return a_; }
  std::span<const double> data() const { return a_; }

  double trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  // max |A_ij − A_ji|
  double asymmetry() const;
  void symmetrize();

  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double s, const Matrix& a);

 private:
  int n_ = 0;
  std::vector<double> a_;
};

// Eigenvalues (ascending) of a symmetric matrix by the cyclic Jacobi method.
std::vector<double> symmetric_eigenvalues(Matrix a, double tol = 1e-14, int max_sweeps = 100);

// Gaussian elimination with partial pivoting. Throws Precondition when the
// matrix is numerically singular.
std::vector<double> solve(Matrix a, std::vector<double> b);

// Least-squares polynomial of the given degree through (xs, ys), returned as
// derivatives of orders 0..max_order at x0.
std::vector<double> polyfit_derivatives(std::span<const double> xs, std::span<const double> ys, double x0, int degree,
                                        int max_order);

double dot(std::span<const double> x, std::span<const double> y);
double norm(std::span<const double> x);

}  // namespace staticlab
