#include <algorithm>
#include <cmath>

#include "saddlekit/error.hpp"
#include "saddlekit/geodesic.hpp"

namespace saddlekit {

double Cylinder::width() const { return std::sqrt(to_double(core.norm_sq())); }
double Cylinder::height() const { return std::sqrt(to_double(height_sq)); }

namespace {

SaddleConnection reversed(const SaddleConnection& c) {
  SaddleConnection r;
  r.holonomy = -c.holonomy;
  r.start = c.end;
  r.end = c.start;
  r.start_corner = c.end_corner;
  r.end_corner = c.start_corner;
  return r;
}

// Follows the boundary on the left of gamma: at each end vertex turn by pi
// clockwise from the incoming direction and continue along u. Every piece is a
// positive multiple of u, so lengths are compared through that multiple.
std::optional<std::vector<SaddleConnection>> left_boundary(const TranslationSurface& s,
                                                           const SaddleConnection& gamma,
                                                           const Rational& max_trace) {
  const ExactVector& u = gamma.holonomy;
  const Rational u_sq = u.norm_sq();
  const Rational budget = max_trace * max_trace;
  std::vector<SaddleConnection> pieces{gamma};
  Rational travelled = 1;  // in units of |u|
  const int max_turn = 3 * static_cast<int>(s.triangle_count());
  while (true) {
    if (travelled * travelled * u_sq > budget) return std::nullopt;
    EdgeSlot corner = pieces.back().end_corner;
    int steps = 0;
    do {
      corner = next_corner_cw(s, corner);
      if (++steps > max_turn) return std::nullopt;
    } while (!corner_contains(s, corner, u));
    if (corner == gamma.start_corner) return pieces;
    const Rational rest_units = Rational(floor_sqrt(budget / u_sq) + 1) - travelled;
    if (sign(rest_units) <= 0) return std::nullopt;
    const RayTrace trace = shoot(s, corner, u, rest_units * rest_units * u_sq);
    if (!trace.hit) return std::nullopt;
    const SaddleConnection& next = *trace.connection;
    travelled += next.holonomy.x != 0 ? Rational(next.holonomy.x / u.x)
                                      : Rational(next.holonomy.y / u.y);
    pieces.push_back(next);
  }
}

// Smallest cross(u, beta) over connections beta leaving gamma's start vertex
// into the half-plane on the left of gamma.
std::optional<Rational> left_height_cross(const TranslationSurface& s,
                                          const SaddleConnection& gamma, const ExactVector& core) {
  const ExactVector& u = gamma.holonomy;
  std::vector<EdgeSlot> sweep{gamma.start_corner};
  for (EdgeSlot c = next_corner_ccw(s, gamma.start_corner);
       c != gamma.start_corner && sign(cross(u, s.edge(c))) > 0; c = next_corner_ccw(s, c)) {
    sweep.push_back(c);
  }
  // The cylinder has width |core| and height at most area/|core|; the
  // connection straight across is no longer than sqrt(|core|^2 + h^2).
  const Rational a = area(s);
  const Rational core_sq = core.norm_sq();
  const Rational radius_sq = core_sq + a * a / core_sq;
  EnumerateOptions opts;
  opts.with_homology = false;
  HolonomySet set;
  try {
    set = enumerate_sq(s, radius_sq, opts);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kResourceLimit) return std::nullopt;
    throw;
  }
  std::optional<Rational> best;
  for (const SaddleConnection& c : set.connections) {
    if (std::find(sweep.begin(), sweep.end(), c.start_corner) == sweep.end()) continue;
    const Rational normal = cross(u, c.holonomy);
    if (sign(normal) <= 0) continue;
    if (!best || normal < *best) best = normal;
  }
  return best;
}

}  // namespace

std::optional<ExactVector> boundary_core(const TranslationSurface& s, const SaddleConnection& gamma,
                                         const Rational& max_trace) {
  if (sign(max_trace) <= 0) throw Error(ErrorCode::kInvalidArgument, "max_trace must be positive");
  for (const bool on_left : {true, false}) {
    const auto pieces = left_boundary(s, on_left ? gamma : reversed(gamma), max_trace);
    if (!pieces) continue;
    ExactVector core;
    for (const auto& p : *pieces) core = core + p.holonomy;
    return on_left ? core : -core;
  }
  return std::nullopt;
}

CylinderResult detect_cylinder(const TranslationSurface& s, const SaddleConnection& gamma,
                               const Rational& max_trace) {
  if (sign(max_trace) <= 0) throw Error(ErrorCode::kInvalidArgument, "max_trace must be positive");
  bool exhausted = false;
  for (const bool on_left : {true, false}) {
    const SaddleConnection g = on_left ? gamma : reversed(gamma);
    const auto pieces = left_boundary(s, g, max_trace);
    if (!pieces) {
      exhausted = true;
      continue;
    }
    ExactVector core;
    for (const auto& p : *pieces) core = core + p.holonomy;
    const auto normal = left_height_cross(s, g, core);
    if (!normal) {
      exhausted = true;
      continue;
    }
    Cylinder cyl;
    cyl.core = core;
    cyl.height_sq = (*normal) * (*normal) / g.holonomy.norm_sq();
    cyl.cylinder_on_left = on_left;
    cyl.boundary = *pieces;
    if (!on_left) {
      for (auto& p : cyl.boundary) p = reversed(p);
      cyl.core = -cyl.core;
    }
    return cyl;
  }
  if (exhausted) return CylinderUnknown{"separatrix trace exceeded max_trace"};
  return NotOnBoundary{};
}

}  // namespace saddlekit
