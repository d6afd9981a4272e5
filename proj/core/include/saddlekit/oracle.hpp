#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "saddlekit/exactplane.hpp"

namespace saddlekit {

/// The unit-covolume lattice g Z^2. Exact g must have det exactly 1, float g
/// within 1e-12.
struct TorusPoint {
  std::variant<ExactMatrix, FloatMatrix> g;
};

/// A torus g Z^2 with a second marked point at v (mod g Z^2), the base of a
/// two-copy slit surface.
struct SlitTorusPoint {
  ExactMatrix g;
  ExactVector v;
};

/// Throws kInvalidArgument on bad determinant or v in g Z^2.
void check_torus_point(const TorusPoint& t);
void check_slit_torus_point(const SlitTorusPoint& t);

/// {g w : w primitive, |g w| <= radius}, ordered by (|.|^2, x, y).
std::vector<ExactVector> torus_holonomy(const ExactMatrix& g, const Rational& radius);
/// Float lattices; the bound is compared in double precision.
std::vector<FloatVector> torus_holonomy(const FloatMatrix& g, double radius);
std::vector<FloatVector> torus_holonomy(const TorusPoint& t, double radius);

/// Number of primitive lattice vectors of length <= radius, without
/// materializing them.
std::size_t torus_count(const FloatMatrix& g, double radius);

struct SlitHolonomy {
  std::vector<ExactVector> vectors;      // predicted distinct holonomies
  std::vector<ExactVector> corrections;  // formula vectors removed by the filter
  bool flagged() const { return !corrections.empty(); }
};

/// Distinct holonomies of saddle connections of length <= radius on the
/// two-copy slit surface over t: primitive lattice vectors together with the
/// translates g Z^2 + v and g Z^2 - v. A vector is dropped when its segment
/// from one marked point runs through another marked point before its end.
SlitHolonomy slit_torus_holonomy(const SlitTorusPoint& t, const Rational& radius);

// ---------------------------------------------------------------------------
// Measures

/// Atom of nu at n, weight weight_phi / zeta(2).
struct NuAtom {
  std::int64_t n = 0;
  std::int64_t weight_phi = 0;
};

struct SiegelVeechMeasureTorus {
  std::vector<NuAtom> nu_atoms;            // n = -max_n..max_n, n != 0
  std::map<std::int64_t, Rational> eta_atoms;  // slope s -> weight
  std::string normalizer = "zeta(2)";      // nu weights are divided by this

  /// weight_phi of the atom at n (any nonzero n, not only stored ones).
  static std::int64_t atom(std::int64_t n);
  /// The atom's real weight, expanding zeta(2) = pi^2 / 6.
  static double atom_value(std::int64_t n);
};

SiegelVeechMeasureTorus sv_measure_torus(std::int64_t max_n = 100);
std::string sv_measure_to_json(const SiegelVeechMeasureTorus& m);

/// 1 / zeta(2) = 6 / pi^2.
double siegel_constant_torus();

/// Counts of det(v1, v2) over ordered pairs of primitive integer vectors with
/// |v1|, |v2| <= bound (the same for every unimodular lattice).
std::map<std::int64_t, std::size_t> determinant_spectrum(const Rational& bound);

/// Collinear pairs in the spectrum's range with v2 != +-v1. Always zero for
/// primitive vectors; kept as an executable check.
std::size_t collinear_non_antipodal_pairs(const Rational& bound);

}  // namespace saddlekit
