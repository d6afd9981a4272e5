#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "saddlekit/surface.hpp"

namespace saddlekit {

/// An L1 ball |p - center|_1 <= radius_l1 with three given points on its
/// boundary.
struct DiamondCertificate {
  ExactVector center;
  Rational radius_l1;

  friend bool operator==(const DiamondCertificate&, const DiamondCertificate&) = default;
};

/// The smallest diamond through three points. Diamonds through three points
/// can come in a nested one-parameter family; its smallest member is the one
/// that matters for emptiness. Throws kCollinear for collinear input and
/// kAmbiguousDiamond when no diamond exists or the smallest is not unique.
DiamondCertificate diamond_of(const ExactVector& p1, const ExactVector& p2, const ExactVector& p3);

/// Signed position of q against the diamond: -1 strictly inside, 0 on the
/// boundary, 1 outside.
int diamond_side(const DiamondCertificate& d, const ExactVector& q);

/// Three corners of triangle t and the opposite corner of its neighbor across
/// edge `edge`, developed with corner `edge.edge` of t at the origin.
struct EdgeQuad {
  ExactVector a, b, c, d;  // edge runs a -> b; c is t's third corner
};
EdgeQuad develop_quad(const TranslationSurface& s, EdgeSlot edge);

/// The fourth vertex of the neighbor lies on or outside the diamond of the
/// triangle. A triangle without any diamond fails. When the smallest diamond
/// is not unique the neighbor's diamond is tested
/// against the triangle's third corner instead.
bool is_locally_delaunay(const TranslationSurface& s, EdgeSlot edge);

struct DelaunayTriangulation {
  TranslationSurface surface;
  /// One per triangle, in that triangle's frame (corner 0 at the origin).
  std::vector<DiamondCertificate> certificates;
  std::size_t flip_count = 0;
};

struct DelaunayOptions {
  /// 0 picks 200 flips per triangle.
  std::size_t max_flips = 0;
};

/// Euclidean flips first, then L1 flips in FIFO order until every edge is
/// locally Delaunay. An L1 pass that hits the flip cap is retried from the
/// same start in seeded random order. Throws kFlipCycle if all retries cycle,
/// kNotDelaunay if the final scan fails and kAmbiguousDiamond when neither
/// side of an edge has a unique smallest diamond.
DelaunayTriangulation delaunay_l1(const TranslationSurface& s, const DelaunayOptions& options = {});

/// Full read-only scan of every edge and certificate.
bool verify_delaunay(const DelaunayTriangulation& t);

/// Surface JSON with extra "certificates" and "flip_count" fields.
std::string delaunay_to_json(const DelaunayTriangulation& t);

// ---------------------------------------------------------------------------
// Planar point sets

/// A planar point set wrapped into a flat torus of side `side` with the points
/// as marked points. Far from the wrap the torus geometry is the planar one.
struct PlanarTorus {
  TranslationSurface surface;
  std::vector<ExactVector> points;
  Rational side;
};

/// Torus of side 4 * (L1 diameter) + 1 with point 0 at the origin. Throws
/// kInvalidArgument on fewer than two points or a repeated point.
PlanarTorus wrap_planar(const std::vector<ExactVector>& points);

/// Diamonds of L1 radius at most this never reach a wrapped copy of a point,
/// so triangles that small are planar Delaunay exactly when torus Delaunay.
Rational planar_safe_radius(const PlanarTorus& torus);

/// Point index of each surface vertex, found by developing the surface and
/// matching positions modulo the torus side.
std::vector<int> vertex_points(const PlanarTorus& torus, const TranslationSurface& s);

/// Planar triangles (point index triples, counterclockwise, smallest index
/// first) of the torus triangulation whose L1 diamond radius is at most
/// `max_radius`. Wrapped triangles are skipped.
std::vector<std::array<int, 3>> planar_triangles(const PlanarTorus& torus,
                                                 const DelaunayTriangulation& t,
                                                 const Rational& max_radius);

/// Brute force: all counterclockwise triples whose smallest diamond has radius
/// at most `max_radius` that has no other point strictly inside.
std::vector<std::array<int, 3>> planar_delaunay_brute_force(const std::vector<ExactVector>& points,
                                                            const Rational& max_radius);

/// Positions of every triangle's corner 0 after developing the surface along a
/// spanning tree from triangle 0 (at the origin).
std::vector<ExactVector> develop_positions(const TranslationSurface& s);

}  // namespace saddlekit
