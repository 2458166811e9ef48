#pragma once

#include <cmath>
#include <complex>
#include <ostream>
#include <utility>

#include "qkrein/error.hpp"

namespace qkrein {

using Complex = std::complex<double>;

/// Real quaternion q = w + x i + y j + z k with double components.
///
/// The complex subfield is span{1, i}; every quaternion splits uniquely as
/// q = a + b j with a, b complex (see complex_pair).
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_ = 0.0, double y_ = 0.0, double z_ = 0.0)
      : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr double real() const { return w; }
  constexpr bool is_zero() const { return w == 0.0 && x == 0.0 && y == 0.0 && z == 0.0; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w;
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w;
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    w *= s;
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  constexpr Quaternion& operator/=(double s) {
    w /= s;
    x /= s;
    y /= s;
    z /= s;
    return *this;
  }
  constexpr Quaternion& operator*=(const Quaternion& o);

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

constexpr Quaternion operator+(Quaternion p, const Quaternion& q) { return p += q; }
constexpr Quaternion operator-(Quaternion p, const Quaternion& q) { return p -= q; }
constexpr Quaternion operator-(const Quaternion& q) { return {-q.w, -q.x, -q.y, -q.z}; }
constexpr Quaternion operator*(Quaternion q, double s) { return q *= s; }
constexpr Quaternion operator*(double s, Quaternion q) { return q *= s; }
constexpr Quaternion operator/(Quaternion q, double s) { return q /= s; }

/// Hamilton product.
constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
          p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
          p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
          p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

constexpr Quaternion& Quaternion::operator*=(const Quaternion& o) {
  *this = *this * o;
  return *this;
}

constexpr Quaternion conj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

/// |q|^2
constexpr double norm2(const Quaternion& q) { return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z; }

/// Same as norm2; lets generic code call norm() on any scalar.
constexpr double norm(const Quaternion& q) { return norm2(q); }

inline double abs(const Quaternion& q) { return std::hypot(std::hypot(q.w, q.x), std::hypot(q.y, q.z)); }

/// conj(q) / |q|^2. Throws DivisionByZero for q = 0.
inline Quaternion inv(const Quaternion& q) {
  const double n2 = norm2(q);
  if (n2 == 0.0) throw DivisionByZero("inverse of the zero quaternion");
  return conj(q) / n2;
}

/// Splits q = a + b j with a = w + x i and b = y + z i.
constexpr std::pair<Complex, Complex> complex_pair(const Quaternion& q) {
  return {Complex(q.w, q.x), Complex(q.y, q.z)};
}

/// Inverse of complex_pair: a + b j.
constexpr Quaternion from_complex_pair(const Complex& a, const Complex& b) {
  return {a.real(), a.imag(), b.real(), b.imag()};
}

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '[' << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ']';
}

}  // namespace qkrein
