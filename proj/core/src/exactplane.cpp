#include "saddlekit/exactplane.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "saddlekit/error.hpp"

namespace saddlekit {

bool length_lex_less(const ExactVector& a, const ExactVector& b) {
  const Rational na = a.norm_sq();
  const Rational nb = b.norm_sq();
  if (na != nb) return na < nb;
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}

int half_plane(const ExactVector& d) {
  const int sy = sgn(d.y);
  if (sy > 0 || (sy == 0 && sgn(d.x) > 0)) return 0;
  return 1;
}

ExactMatrix ExactMatrix::quarter_turn(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return identity();
    case 1: return {Rational(0), Rational(-1), Rational(1), Rational(0)};
    case 2: return {Rational(-1), Rational(0), Rational(0), Rational(-1)};
    default: return {Rational(0), Rational(1), Rational(-1), Rational(0)};
  }
}

bool ExactMatrix::is_integral() const {
  return a.get_den() == 1 && b.get_den() == 1 && c.get_den() == 1 &&
         d.get_den() == 1;
}

ExactMatrix ExactMatrix::inverse() const {
  const Rational det_value = det();
  if (sgn(det_value) == 0) {
    throw Error(ErrorCode::kSingularMatrix, "matrix is singular");
  }
  return {d / det_value, -b / det_value, -c / det_value, a / det_value};
}

ExactMatrix operator*(const ExactMatrix& m, const ExactMatrix& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
          m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

FloatMatrix::FloatMatrix(double a, double b, double c, double d)
    : a_(a), b_(b), c_(c), d_(d) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) ||
      !std::isfinite(d)) {
    throw Error(ErrorCode::kInvalidArgument, "matrix entry is not finite");
  }
}

FloatMatrix FloatMatrix::rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c, -s, s, c};
}

FloatMatrix FloatMatrix::from_exact(const ExactMatrix& m) {
  return {to_double(m.a), to_double(m.b), to_double(m.c), to_double(m.d)};
}

double FloatMatrix::operator_norm() const {
  // sigma_max^2 is the larger eigenvalue of M^T M.
  const double p = a_ * a_ + c_ * c_;
  const double q = a_ * b_ + c_ * d_;
  const double r = b_ * b_ + d_ * d_;
  const double half_trace = 0.5 * (p + r);
  const double disc = std::sqrt(0.25 * (p - r) * (p - r) + q * q);
  return std::sqrt(half_trace + disc);
}

FloatMatrix FloatMatrix::inverse() const {
  const double det_value = det();
  if (det_value == 0.0) {
    throw Error(ErrorCode::kSingularMatrix, "matrix is singular");
  }
  return {d_ / det_value, -b_ / det_value, -c_ / det_value, a_ / det_value};
}

FloatMatrix operator*(const FloatMatrix& m, const FloatMatrix& n) {
  return {m.a() * n.a() + m.b() * n.c(), m.a() * n.b() + m.b() * n.d(),
          m.c() * n.a() + m.d() * n.c(), m.c() * n.b() + m.d() * n.d()};
}

ExactVector apply_matrix(const ExactMatrix& m, const ExactVector& v) {
  return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
}

FloatVector apply_matrix(const FloatMatrix& m, const ExactVector& v) {
  return apply_matrix(m, to_float(v));
}

FloatVector apply_matrix(const FloatMatrix& m, const FloatVector& v) {
  return {m.a() * v.x + m.b() * v.y, m.c() * v.x + m.d() * v.y};
}

FloatVector to_float(const ExactVector& v) {
  return {to_double(v.x), to_double(v.y)};
}

std::int64_t gcd_i64(std::int64_t a, std::int64_t b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

std::int64_t euler_phi(std::int64_t n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "euler_phi needs n >= 1");
  std::int64_t result = n;
  std::int64_t m = n;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    while (m % p == 0) m /= p;
    result -= result / p;
  }
  if (m > 1) result -= result / m;
  return result;
}

Integer floor_sqrt(const Rational& q) {
  if (sgn(q) < 0) throw Error(ErrorCode::kInvalidArgument, "floor_sqrt of negative");
  // floor(sqrt(n/d)) = floor(sqrt(floor(n/d))) for integers n, d > 0.
  Integer whole = q.get_num() / q.get_den();
  Integer root;
  mpz_sqrt(root.get_mpz_t(), whole.get_mpz_t());
  return root;
}

std::vector<IntVector> primitive_points_in_disc_sq(const Rational& radius_sq) {
  std::vector<IntVector> out;
  if (sgn(radius_sq) <= 0) return out;
  const Integer bound = floor_sqrt(radius_sq);
  if (!bound.fits_slong_p()) {
    throw Error(ErrorCode::kResourceLimit, "radius too large for lattice scan");
  }
  const std::int64_t b = bound.get_si();
  for (std::int64_t p = -b; p <= b; ++p) {
    const Rational rest = radius_sq - Rational(p * p);
    if (sgn(rest) < 0) continue;
    const std::int64_t qmax = floor_sqrt(rest).get_si();
    for (std::int64_t q = -qmax; q <= qmax; ++q) {
      if (gcd_i64(p, q) == 1) out.push_back({p, q});
    }
  }
  std::sort(out.begin(), out.end(), [](const IntVector& u, const IntVector& v) {
    const auto nu = u.x * u.x + u.y * u.y;
    const auto nv = v.x * v.x + v.y * v.y;
    if (nu != nv) return nu < nv;
    return u < v;
  });
  return out;
}

std::vector<IntVector> primitive_points_in_disc(const Rational& radius) {
  if (sgn(radius) <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "radius must be positive");
  }
  return primitive_points_in_disc_sq(radius * radius);
}

}  // namespace saddlekit
