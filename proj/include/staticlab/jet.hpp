#pragma once

// Forward-mode derivative jets: a value together with its first three
// derivatives with respect to one scalar variable. Profiles of the radial
// coordinate are evaluated on jets so that the closed-form curvature path
// gets exact derivatives without symbolic machinery.

#include <array>
#include <cmath>

namespace staticlab {

struct Jet {
  static constexpr int kOrder = 3;
  std::array<double, kOrder + 1> d{};  // d[k] = k-th derivative

  constexpr Jet() = default;
  constexpr explicit Jet(double value) : d{value, 0.0, 0.0, 0.0} {}
  constexpr Jet(double v0, double v1, double v2, double v3) : d{v0, v1, v2, v3} {}

  static constexpr Jet variable(double x) { return {x, 1.0, 0.0, 0.0}; }
  static constexpr Jet constant(double x) { return Jet(x); }

  constexpr double value() const { return d[0]; }
  constexpr double operator[](int k) const { return d[static_cast<std::size_t>(k)]; }
};

// Chain rule for an outer function with derivatives f0..f3 at u = x.value().
constexpr Jet compose(const Jet& x, double f0, double f1, double f2, double f3) {
  const double x1 = x.d[1], x2 = x.d[2], x3 = x.d[3];
  return {f0, f1 * x1, f2 * x1 * x1 + f1 * x2,
          f3 * x1 * x1 * x1 + 3.0 * f2 * x1 * x2 + f1 * x3};
}

constexpr Jet operator+(const Jet& a, const Jet& b) {
  return {a.d[0] + b.d[0], a.d[1] + b.d[1], a.d[2] + b.d[2], a.d[3] + b.d[3]};
}
constexpr Jet operator-(const Jet& a, const Jet& b) {
  return {a.d[0] - b.d[0], a.d[1] - b.d[1], a.d[2] - b.d[2], a.d[3] - b.d[3]};
}
constexpr Jet operator-(const Jet& a) { return {-a.d[0], -a.d[1], -a.d[2], -a.d[3]}; }

constexpr Jet operator*(const Jet& a, const Jet& b) {
  return {a.d[0] * b.d[0],
          a.d[1] * b.d[0] + a.d[0] * b.d[1],
          a.d[2] * b.d[0] + 2.0 * a.d[1] * b.d[1] + a.d[0] * b.d[2],
          a.d[3] * b.d[0] + 3.0 * a.d[2] * b.d[1] + 3.0 * a.d[1] * b.d[2] + a.d[0] * b.d[3]};
}

inline Jet reciprocal(const Jet& a) {
  const double u = a.d[0];
  const double r = 1.0 / u;
  return compose(a, r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

constexpr Jet operator+(const Jet& a, double c) { return {a.d[0] + c, a.d[1], a.d[2], a.d[3]}; }
constexpr Jet operator+(double c, const Jet& a) { return a + c; }
constexpr Jet operator-(const Jet& a, double c) { return {a.d[0] - c, a.d[1], a.d[2], a.d[3]}; }
constexpr Jet operator-(double c, const Jet& a) { return {c - a.d[0], -a.d[1], -a.d[2], -a.d[3]}; }
constexpr Jet operator*(const Jet& a, double c) { return {a.d[0] * c, a.d[1] * c, a.d[2] * c, a.d[3] * c}; }
constexpr Jet operator*(double c, const Jet& a) { return a * c; }
constexpr Jet operator/(const Jet& a, double c) { return a * (1.0 / c); }
inline Jet operator/(double c, const Jet& a) { return c * reciprocal(a); }

inline Jet sin(const Jet& a) {
  const double s = std::sin(a.d[0]), c = std::cos(a.d[0]);
  return compose(a, s, c, -s, -c);
}
inline Jet cos(const Jet& a) {
  const double s = std::sin(a.d[0]), c = std::cos(a.d[0]);
  return compose(a, c, -s, -c, s);
}
inline Jet tan(const Jet& a) {
  const double t = std::tan(a.d[0]);
  const double sec2 = 1.0 + t * t;
  return compose(a, t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (sec2 + 2.0 * t * t));
}
inline Jet sinh(const Jet& a) {
  const double s = std::sinh(a.d[0]), c = std::cosh(a.d[0]);
  return compose(a, s, c, s, c);
}
inline Jet cosh(const Jet& a) {
  const double s = std::sinh(a.d[0]), c = std::cosh(a.d[0]);
  return compose(a, c, s, c, s);
}
inline Jet tanh(const Jet& a) {
  const double t = std::tanh(a.d[0]);
  const double sech2 = 1.0 - t * t;
  return compose(a, t, sech2, -2.0 * t * sech2, sech2 * (6.0 * t * t - 2.0));
}
inline Jet exp(const Jet& a) {
  const double e = std::exp(a.d[0]);
  return compose(a, e, e, e, e);
}
inline Jet log(const Jet& a) {
  const double u = a.d[0];
  return compose(a, std::log(u), 1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u));
}
inline Jet sqrt(const Jet& a) {
  const double u = a.d[0];
  const double s = std::sqrt(u);
  return compose(a, s, 0.5 / s, -0.25 / (s * u), 0.375 / (s * u * u));
}
inline Jet pow(const Jet& a, double p) {
  const double u = a.d[0];
  // Integer powers stay defined for negative bases.
  return compose(a, std::pow(u, p), p * std::pow(u, p - 1.0),
                 p * (p - 1.0) * std::pow(u, p - 2.0),
                 p * (p - 1.0) * (p - 2.0) * std::pow(u, p - 3.0));
}
inline Jet pow(const Jet& a, const Jet& b) {
  const bool constant_exponent = b.d[1] == 0.0 && b.d[2] == 0.0 && b.d[3] == 0.0;
  if (constant_exponent) return pow(a, b.d[0]);
  return exp(b * log(a));
}

}  // namespace staticlab
