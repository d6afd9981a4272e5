#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "saddlekit/exactplane.hpp"
#include "saddlekit/surface.hpp"

namespace saddlekit::testing {

struct Named {
  std::string name;
  TranslationSurface surface;
};

inline Rational rand_ratio(std::mt19937_64& rng, long lo, long hi, long den) {
  std::uniform_int_distribution<long> d(lo * den, hi * den);
  return ratio(d(rng), den);
}

/// det-1 rational matrix with entries of moderate size.
inline ExactMatrix random_sl2(std::mt19937_64& rng) {
  for (;;) {
    const Rational a = rand_ratio(rng, 1, 2, 6);
    const Rational b = rand_ratio(rng, -1, 1, 5);
    const Rational c = rand_ratio(rng, -1, 1, 7);
    if (sgn(a) == 0) continue;
    ExactMatrix m{a, b, c, (1 + b * c) / a};
    if (abs(m.d) <= 2 && abs(m.d) >= ratio(1, 3)) return m;
  }
}

/// A point strictly inside the unit square with small denominators.
inline ExactVector random_slit(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> den(2, 9);
  const long dx = den(rng), dy = den(rng);
  std::uniform_int_distribution<long> nx(1, dx - 1), ny(1, dy - 1);
  return {ratio(nx(rng), dx), ratio(ny(rng), dy)};
}

/// Fixed builders plus sheared and slit variants.
inline std::vector<Named> fixed_corpus() {
  return {
      {"torus", square_torus()},
      {"shear", lattice_torus(ExactMatrix{1, 1, 0, 1})},
      {"shear3", lattice_torus(ExactMatrix{1, 3, 0, 1})},
      {"diag", lattice_torus(ExactMatrix::diag(ratio(1, 2), 2))},
      {"octagon", octagon_surface()},
      {"slit", slit_torus({ratio(1, 3), ratio(1, 5)})},
      {"slit_half", slit_torus({ratio(1, 2), ratio(1, 2)})},
      {"marked", marked_torus({ratio(1, 2), ratio(1, 3)})},
      {"slit_g", slit_torus({ratio(1, 3), ratio(1, 5)},
                            ExactMatrix{ratio(3, 2), ratio(7, 5), ratio(1, 3), ratio(19, 15)})},
  };
}

/// An edge of slope +-1 lets a whole family of equal diamonds pass through a
/// triangle; such surfaces are measure zero and are redrawn.
inline bool has_diagonal_edge(const TranslationSurface& s) {
  for (const auto& t : s.triangles()) {
    for (const auto& e : t.edges) {
      if (abs(e.x) == abs(e.y)) return true;
    }
  }
  return false;
}

/// n random sheared tori and slit tori, alternating.
inline std::vector<Named> random_corpus(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Named> out;
  while (out.size() < n) {
    const std::size_t i = out.size();
    const ExactMatrix g = random_sl2(rng);
    TranslationSurface s = i % 2 == 0 ? lattice_torus(g) : slit_torus(random_slit(rng), g);
    if (has_diagonal_edge(s)) continue;
    out.push_back({(i % 2 == 0 ? "sheared" : "slit") + std::to_string(i), std::move(s)});
  }
  return out;
}

/// n distinct points with coordinates k / den, 0 <= k < span.
inline std::vector<ExactVector> random_points(std::mt19937_64& rng, std::size_t n, long span = 1000,
                                              long den = 97) {
  std::uniform_int_distribution<long> d(0, span - 1);
  std::set<std::pair<long, long>> seen;
  std::vector<ExactVector> pts;
  while (pts.size() < n) {
    const long x = d(rng), y = d(rng);
    if (!seen.insert({x, y}).second) continue;
    pts.push_back({ratio(x, den), ratio(y, den + 2)});
  }
  return pts;
}

inline std::vector<ExactVector> sorted(std::vector<ExactVector> v) {
  std::sort(v.begin(), v.end(), length_lex_less);
  return v;
}

}  // namespace saddlekit::testing
