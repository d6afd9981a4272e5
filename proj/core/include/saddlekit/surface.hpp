#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "saddlekit/exactplane.hpp"

namespace saddlekit {

/// Identifies edge `edge` (0..2) of triangle `triangle`. Edge i of a triangle
/// runs from its corner i to corner i+1.
struct EdgeSlot {
  int triangle = 0;
  int edge = 0;

  friend auto operator<=>(const EdgeSlot&, const EdgeSlot&) = default;
};

inline int next_edge(int i) { return (i + 1) % 3; }
inline int prev_edge(int i) { return (i + 2) % 3; }

/// Three edge vectors in counterclockwise order; they sum to zero on a valid
/// surface.
struct Triangle {
  std::array<ExactVector, 3> edges;

  friend bool operator==(const Triangle&, const Triangle&) = default;
  /// Twice the signed area, cross(e0, e1).
  Rational doubled_area() const { return cross(edges[0], edges[1]); }
};

/// Glued-triangle model of a translation surface. The constructor only checks
/// that indices are in range; use validate() for the geometric invariants.
class TranslationSurface {
 public:
  TranslationSurface() = default;
  /// `gluing[t][i]` is the slot glued to edge i of triangle t.
  TranslationSurface(std::vector<Triangle> triangles,
                     std::vector<std::array<EdgeSlot, 3>> gluing);

  std::size_t triangle_count() const { return triangles_.size(); }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const Triangle& triangle(int t) const { return triangles_[static_cast<std::size_t>(t)]; }
  const ExactVector& edge(EdgeSlot s) const {
    return triangles_[static_cast<std::size_t>(s.triangle)].edges[static_cast<std::size_t>(s.edge)];
  }
  EdgeSlot partner(EdgeSlot s) const {
    return gluing_[static_cast<std::size_t>(s.triangle)][static_cast<std::size_t>(s.edge)];
  }
  const std::vector<std::array<EdgeSlot, 3>>& gluing() const { return gluing_; }

  /// Position of corner i relative to corner 0 of the same triangle.
  ExactVector corner_offset(int t, int i) const;

  friend bool operator==(const TranslationSurface&, const TranslationSurface&) = default;

 private:
  std::vector<Triangle> triangles_;
  std::vector<std::array<EdgeSlot, 3>> gluing_;
};

/// Corner bookkeeping derived from the gluing. Corner (t, i) is the vertex at
/// the start of edge i of triangle t.
struct Topology {
  std::vector<std::array<int, 3>> corner_vertex;
  /// Corners around each vertex in counterclockwise order.
  std::vector<std::vector<EdgeSlot>> vertex_corners;
  /// Cone angle of each vertex in units of 2*pi (zero order + 1).
  std::vector<int> cone_turns;
  int vertex_count = 0;
  int edge_count = 0;
  int face_count = 0;
  int genus = 0;

  int vertex_of(EdgeSlot corner) const {
    return corner_vertex[static_cast<std::size_t>(corner.triangle)][static_cast<std::size_t>(corner.edge)];
  }
};

/// The corner counterclockwise-adjacent to `corner` around the same vertex.
EdgeSlot next_corner_ccw(const TranslationSurface& s, EdgeSlot corner);
/// Inverse of next_corner_ccw.
EdgeSlot next_corner_cw(const TranslationSurface& s, EdgeSlot corner);

/// Requires an involutive gluing (throws kGluingNotInvolutive otherwise).
Topology compute_topology(const TranslationSurface& s);

struct StratumSignature {
  std::vector<int> zero_orders;  // sorted ascending
  int genus = 0;
  int marked_points = 0;         // |Sigma|, regular marked points included
  int relative_dimension = 0;    // N = 2g + |Sigma| - 1

  friend bool operator==(const StratumSignature&, const StratumSignature&) = default;
};

/// Checks every surface invariant and returns the stratum data. Throws Error
/// with kMalformed, kGluingNotInvolutive, kGluingNotOpposite, kEdgeSum,
/// kNonpositiveArea or kConeAngle.
StratumSignature validate(const TranslationSurface& s);

Rational area(const TranslationSurface& s);

/// Maps every edge vector by m. A negative determinant also reverses the
/// orientation, so the triangles are re-listed to stay counterclockwise.
/// Throws kSingularMatrix when det(m) = 0.
TranslationSurface apply_surface(const ExactMatrix& m, const TranslationSurface& s);

// ---------------------------------------------------------------------------
// Builders

/// A polygon given by its side vectors in counterclockwise order.
struct Polygon {
  std::vector<ExactVector> sides;
};

/// Side k of polygon p.
struct PolygonSide {
  int polygon = 0;
  int side = 0;

  friend auto operator<=>(const PolygonSide&, const PolygonSide&) = default;
};

/// Ear-clips every polygon into triangles and glues the given side pairs.
/// Every side must appear in exactly one pair.
TranslationSurface from_polygons(const std::vector<Polygon>& polygons,
                                 const std::vector<std::array<PolygonSide, 2>>& side_pairs);

/// Unit square with opposite sides glued, split along the (1,1) diagonal.
TranslationSurface square_torus();

/// The square torus mapped by g (lattice g*Z^2).
TranslationSurface lattice_torus(const ExactMatrix& g);

/// Centrally symmetric octagon with side vectors (1,0),(1,1),(0,1),(-1,1),...
/// and opposite sides glued: a rational model of the regular octagon in H(2).
TranslationSurface octagon_surface();

/// Two copies of the torus g*Z^2 glued along a slit from the origin to g*w,
/// where w lies strictly inside the unit square. Lands in H(1,1).
TranslationSurface slit_torus(const ExactVector& w, const ExactMatrix& g = ExactMatrix::identity());

/// Torus g*Z^2 with marked points at the origin and at g*w (w strictly inside
/// the unit square); a surface in H(0,0).
TranslationSurface marked_torus(const ExactVector& w, const ExactMatrix& g = ExactMatrix::identity());

// ---------------------------------------------------------------------------
// JSON form: {"triangles":[{"edges":[["1","0"],["0","1"],["-1","-1"]]},...],
//             "gluings":[[[0,0],[1,2]],...]}

std::string surface_to_json(const TranslationSurface& s);
TranslationSurface surface_from_json(const std::string& text);

}  // namespace saddlekit
