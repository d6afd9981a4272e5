#include "saddlekit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "saddlekit/error.hpp"

namespace saddlekit {

namespace {

constexpr double kDetTolerance = 1e-12;

// |w| <= frob(g^-1) |g w|, so this bounds the preimage of the disc.
Rational preimage_radius_sq(const ExactMatrix& g, const Rational& radius) {
  const ExactMatrix inv = g.inverse();
  return radius * radius * (inv.a * inv.a + inv.b * inv.b + inv.c * inv.c + inv.d * inv.d);
}

void sort_unique(std::vector<ExactVector>& v) {
  std::sort(v.begin(), v.end(), length_lex_less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Smallest t > 0 with t x in Z^2, or 0 when x = 0.
Rational lattice_period(const ExactVector& x) {
  if (x.is_zero()) return 0;
  Integer den;
  mpz_lcm(den.get_mpz_t(), x.x.get_den_mpz_t(), x.y.get_den_mpz_t());
  const Integer px = x.x.get_num() * (den / x.x.get_den());
  const Integer py = x.y.get_num() * (den / x.y.get_den());
  Integer h;
  mpz_gcd(h.get_mpz_t(), px.get_mpz_t(), py.get_mpz_t());
  Rational t(den, h);
  t.canonicalize();
  return t;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace

void check_torus_point(const TorusPoint& t) {
  if (const auto* m = std::get_if<ExactMatrix>(&t.g)) {
    if (!m->is_sl2()) throw Error(ErrorCode::kInvalidArgument, "torus matrix must have det 1");
  } else {
    const double det = std::get<FloatMatrix>(t.g).det();
    if (std::abs(det - 1.0) > kDetTolerance) {
      throw Error(ErrorCode::kInvalidArgument, "torus matrix must have det 1");
    }
  }
}

void check_slit_torus_point(const SlitTorusPoint& t) {
  if (!t.g.is_sl2()) throw Error(ErrorCode::kInvalidArgument, "torus matrix must have det 1");
  const ExactVector u = apply_matrix(t.g.inverse(), t.v);
  if (is_integer(u.x) && is_integer(u.y)) {
    throw Error(ErrorCode::kInvalidArgument, "slit holonomy lies in the lattice");
  }
}

std::vector<ExactVector> torus_holonomy(const ExactMatrix& g, const Rational& radius) {
  check_torus_point({g});
  std::vector<ExactVector> out;
  if (sgn(radius) <= 0) return out;
  const Rational r2 = radius * radius;
  for (const IntVector& w : primitive_points_in_disc_sq(preimage_radius_sq(g, radius))) {
    ExactVector v = apply_matrix(g, ExactVector(w.x, w.y));
    if (v.norm_sq() <= r2) out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end(), length_lex_less);
  return out;
}

namespace {

// Calls fn(x, y) for every primitive (p, q) with |p b1 + q b2| <= radius.
template <class Fn>
void scan_float_lattice(const FloatMatrix& g, double radius, Fn&& fn) {
  if (!(radius > 0.0)) return;
  const double b1x = g.a(), b1y = g.c(), b2x = g.b(), b2y = g.d();
  const double n1 = b1x * b1x + b1y * b1y;
  const double dot12 = b1x * b2x + b1y * b2y;
  const double n2 = b2x * b2x + b2y * b2y;
  const double det = std::abs(g.det());
  const double r2 = radius * radius;
  // The distance from q b2 to the line through b1 is |q| det / |b1|.
  const auto qmax = static_cast<std::int64_t>(std::floor(radius * std::sqrt(n1) / det)) + 1;
  for (std::int64_t q = -qmax; q <= qmax; ++q) {
    const double dq = static_cast<double>(q);
    // n1 p^2 + 2 q dot12 p + q^2 n2 - r2 <= 0
    const double disc = dq * dq * (dot12 * dot12 - n1 * n2) + n1 * r2;
    if (disc < 0.0) continue;
    const double centre = -dq * dot12 / n1;
    const double half = std::sqrt(disc) / n1;
    const auto plo = static_cast<std::int64_t>(std::floor(centre - half)) - 1;
    const auto phi = static_cast<std::int64_t>(std::ceil(centre + half)) + 1;
    for (std::int64_t p = plo; p <= phi; ++p) {
      if (gcd_i64(p, q) != 1) continue;
      const double x = static_cast<double>(p) * b1x + dq * b2x;
      const double y = static_cast<double>(p) * b1y + dq * b2y;
      if (x * x + y * y <= r2) fn(x, y);
    }
  }
}

}  // namespace

std::vector<FloatVector> torus_holonomy(const FloatMatrix& g, double radius) {
  check_torus_point({g});
  std::vector<FloatVector> out;
  scan_float_lattice(g, radius, [&](double x, double y) { out.push_back({x, y}); });
  std::sort(out.begin(), out.end(), [](const FloatVector& u, const FloatVector& v) {
    if (u.norm_sq() != v.norm_sq()) return u.norm_sq() < v.norm_sq();
    if (u.x != v.x) return u.x < v.x;
    return u.y < v.y;
  });
  return out;
}

std::vector<FloatVector> torus_holonomy(const TorusPoint& t, double radius) {
  if (const auto* m = std::get_if<ExactMatrix>(&t.g)) {
    std::vector<FloatVector> out;
    for (const ExactVector& v : torus_holonomy(*m, from_double(radius))) out.push_back(to_float(v));
    return out;
  }
  return torus_holonomy(std::get<FloatMatrix>(t.g), radius);
}

std::size_t torus_count(const FloatMatrix& g, double radius) {
  check_torus_point({g});
  std::size_t n = 0;
  scan_float_lattice(g, radius, [&](double, double) { ++n; });
  return n;
}

SlitHolonomy slit_torus_holonomy(const SlitTorusPoint& t, const Rational& radius) {
  check_slit_torus_point(t);
  SlitHolonomy out;
  if (sgn(radius) <= 0) return out;
  const Rational r2 = radius * radius;
  const ExactMatrix inv = t.g.inverse();
  const ExactVector u = apply_matrix(inv, t.v);

  // Closed connections: primitive w, blocked when the line through w meets
  // u + Z^2, which for primitive w happens iff cross(w, u) is an integer.
  for (const IntVector& iw : primitive_points_in_disc_sq(preimage_radius_sq(t.g, radius))) {
    const ExactVector w(iw.x, iw.y);
    ExactVector v = apply_matrix(t.g, w);
    if (v.norm_sq() > r2) continue;
    (is_integer(cross(w, u)) ? out.corrections : out.vectors).push_back(std::move(v));
  }

  // Connections between the two points: +-u + n. A marked point strictly
  // inside the segment 0 -> x exists iff some t in (0, 1) has t x in Z^2.
  const Rational pre2 = preimage_radius_sq(t.g, radius);
  const Integer box = floor_sqrt(pre2) + 2;
  if (!box.fits_slong_p()) throw Error(ErrorCode::kResourceLimit, "radius too large for lattice scan");
  const long b = box.get_si();
  for (int s : {1, -1}) {
    const ExactVector su = Rational(s) * u;
    for (long nx = -b; nx <= b; ++nx) {
      for (long ny = -b; ny <= b; ++ny) {
        const ExactVector x = su + ExactVector(nx, ny);
        if (x.norm_sq() > pre2) continue;
        ExactVector v = apply_matrix(t.g, x);
        if (v.norm_sq() > r2) continue;
        (lattice_period(x) < 1 ? out.corrections : out.vectors).push_back(std::move(v));
      }
    }
  }
  sort_unique(out.vectors);
  sort_unique(out.corrections);
  return out;
}

std::int64_t SiegelVeechMeasureTorus::atom(std::int64_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "nu has no atom at 0");
  return euler_phi(n < 0 ? -n : n);
}

double SiegelVeechMeasureTorus::atom_value(std::int64_t n) {
  return static_cast<double>(atom(n)) * siegel_constant_torus();
}

SiegelVeechMeasureTorus sv_measure_torus(std::int64_t max_n) {
  if (max_n < 1) throw Error(ErrorCode::kInvalidArgument, "max_n must be positive");
  SiegelVeechMeasureTorus m;
  for (std::int64_t n = -max_n; n <= max_n; ++n) {
    if (n != 0) m.nu_atoms.push_back({n, SiegelVeechMeasureTorus::atom(n)});
  }
  m.eta_atoms = {{-1, Rational(1)}, {1, Rational(1)}};
  return m;
}

std::string sv_measure_to_json(const SiegelVeechMeasureTorus& m) {
  nlohmann::json nu = nlohmann::json::array();
  for (const NuAtom& a : m.nu_atoms) nu.push_back({{"n", a.n}, {"weight_phi", a.weight_phi}});
  nlohmann::json eta = nlohmann::json::array();
  for (const auto& [s, w] : m.eta_atoms) eta.push_back({{"slope", s}, {"weight", format_rational(w)}});
  return nlohmann::json{{"nu", {{"normalizer", m.normalizer}, {"atoms", nu}}},
                        {"eta", {{"atoms", eta}}}}
      .dump();
}

double siegel_constant_torus() { return 6.0 / (std::numbers::pi * std::numbers::pi); }

std::map<std::int64_t, std::size_t> determinant_spectrum(const Rational& bound) {
  const std::vector<IntVector> pts = primitive_points_in_disc(bound);
  std::map<std::int64_t, std::size_t> out;
  for (const IntVector& a : pts) {
    for (const IntVector& b : pts) ++out[a.x * b.y - a.y * b.x];
  }
  return out;
}

std::size_t collinear_non_antipodal_pairs(const Rational& bound) {
  const std::vector<IntVector> pts = primitive_points_in_disc(bound);
  std::size_t bad = 0;
  for (const IntVector& a : pts) {
    for (const IntVector& b : pts) {
      if (a.x * b.y - a.y * b.x != 0) continue;
      if (!(a == b) && !(a.x == -b.x && a.y == -b.y)) ++bad;
    }
  }
  return bad;
}

}  // namespace saddlekit
