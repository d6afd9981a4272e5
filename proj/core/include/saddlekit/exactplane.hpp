#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "saddlekit/rational.hpp"

namespace saddlekit {

/// Planar vector with exact rational coordinates (holonomy and edge vectors).
struct ExactVector {
  Rational x;
  Rational y;

  ExactVector() = default;
  ExactVector(Rational x_, Rational y_) : x(std::move(x_)), y(std::move(y_)) {}
  ExactVector(long x_, long y_) : x(x_), y(y_) {}

  friend bool operator==(const ExactVector& a, const ExactVector& b) {
    return a.x == b.x && a.y == b.y;
  }
  friend ExactVector operator+(const ExactVector& a, const ExactVector& b) {
    return {a.x + b.x, a.y + b.y};
  }
  friend ExactVector operator-(const ExactVector& a, const ExactVector& b) {
    return {a.x - b.x, a.y - b.y};
  }
  friend ExactVector operator-(const ExactVector& a) { return {-a.x, -a.y}; }
  friend ExactVector operator*(const Rational& s, const ExactVector& a) {
    return {s * a.x, s * a.y};
  }
  ExactVector& operator+=(const ExactVector& o) {
    x += o.x;
    y += o.y;
    return *this;
  }

  bool is_zero() const { return sgn(x) == 0 && sgn(y) == 0; }
  Rational norm_sq() const { return x * x + y * y; }
  Rational norm_l1() const { return abs(x) + abs(y); }
};

/// Total order used for canonical output: (|v|^2, x, y).
bool length_lex_less(const ExactVector& a, const ExactVector& b);

/// Plain lexicographic (x, y); suitable for std::set keys.
struct LexLess {
  bool operator()(const ExactVector& a, const ExactVector& b) const {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
};

inline Rational cross(const ExactVector& a, const ExactVector& b) {
  return a.x * b.y - a.y * b.x;
}
inline Rational dot(const ExactVector& a, const ExactVector& b) {
  return a.x * b.x + a.y * b.y;
}
inline int orient(const ExactVector& a, const ExactVector& b) {
  return sgn(cross(a, b));
}

/// 0 for directions in [0, pi), 1 for [pi, 2pi); used for exact angle
/// bookkeeping without trigonometry.
int half_plane(const ExactVector& d);

/// Exact 2x2 matrix [[a, b], [c, d]].
struct ExactMatrix {
  Rational a{1}, b{0}, c{0}, d{1};

  static ExactMatrix identity() { return {}; }
  static ExactMatrix diag(Rational p, Rational q) {
    return {std::move(p), Rational(0), Rational(0), std::move(q)};
  }
  /// Counterclockwise rotation by k quarter turns.
  static ExactMatrix quarter_turn(int k);

  Rational det() const { return a * d - b * c; }
  bool is_sl2() const { return det() == 1; }
  bool is_integral() const;
  /// Throws Error(kSingularMatrix) when det = 0.
  ExactMatrix inverse() const;

  friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;
  friend ExactMatrix operator*(const ExactMatrix& m, const ExactMatrix& n);
};

struct FloatVector {
  double x = 0.0;
  double y = 0.0;

  double norm_sq() const { return x * x + y * y; }
};

/// Double-precision 2x2 matrix; construction rejects non-finite entries.
class FloatMatrix {
 public:
  FloatMatrix() = default;
  FloatMatrix(double a, double b, double c, double d);

  static FloatMatrix rotation(double theta);
  static FloatMatrix diag(double p, double q) { return {p, 0.0, 0.0, q}; }
  static FloatMatrix from_exact(const ExactMatrix& m);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  double det() const { return a_ * d_ - b_ * c_; }
  /// Largest singular value.
  double operator_norm() const;
  FloatMatrix inverse() const;

  friend FloatMatrix operator*(const FloatMatrix& m, const FloatMatrix& n);

 private:
  double a_ = 1.0, b_ = 0.0, c_ = 0.0, d_ = 1.0;
};

ExactVector apply_matrix(const ExactMatrix& m, const ExactVector& v);
FloatVector apply_matrix(const FloatMatrix& m, const ExactVector& v);
FloatVector apply_matrix(const FloatMatrix& m, const FloatVector& v);

FloatVector to_float(const ExactVector& v);

/// Euler's totient; n must be positive.
std::int64_t euler_phi(std::int64_t n);

std::int64_t gcd_i64(std::int64_t a, std::int64_t b);

struct IntVector {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend auto operator<=>(const IntVector&, const IntVector&) = default;
};

/// All primitive integer vectors (gcd(|p|,|q|) = 1) with p^2 + q^2 <= radius^2,
/// ordered by (|v|^2, x, y).
std::vector<IntVector> primitive_points_in_disc(const Rational& radius);

/// Same, with the bound given as an exact squared radius.
std::vector<IntVector> primitive_points_in_disc_sq(const Rational& radius_sq);

/// floor(sqrt(q)) for q >= 0, exact.
Integer floor_sqrt(const Rational& q);

}  // namespace saddlekit
