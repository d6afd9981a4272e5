#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "saddlekit/delaunay.hpp"
#include "saddlekit/geodesic.hpp"

namespace saddlekit {

/// A path along triangulation edges. edges[k] is the slot whose edge vector
/// is the k-th step, so the step holonomy is surface.edge(edges[k]).
struct ChewPath {
  std::vector<EdgeSlot> edges;
  std::vector<ExactVector> steps;     // holonomy of each edge
  std::vector<ExactVector> vertices;  // developed, starting at the origin
  ExactVector target;                 // holonomy of the segment being shadowed
  /// Upper bound on (sum of edge lengths)^2 from outward-rounded intervals.
  Rational total_length_sq_bound;
  /// Upper bound on (sum of edge lengths) / |target|.
  double ratio_upper_bound = 1.0;
};

/// Chew's path for a saddle connection of t.surface. Throws kInvalidArgument
/// when beta is not a connection of that surface, kNotDelaunay without one
/// certificate per triangle and kChewCaseFour if a vertex on the lower side
/// of a diamond is not on its lower left.
ChewPath chew_path(const DelaunayTriangulation& t, const SaddleConnection& beta);

/// A planar point set with its L1 Delaunay triangulation, built once for
/// many path queries.
struct PlanarDelaunay {
  PlanarTorus torus;
  DelaunayTriangulation delaunay;
  std::vector<int> vertex_point;  // surface vertex -> point index
  std::vector<int> point_vertex;  // point index -> surface vertex
};
PlanarDelaunay planar_delaunay(const std::vector<ExactVector>& points);

/// Path from point a to point b. Points lying on the segment split it into
/// pieces whose paths are concatenated.
ChewPath planar_chew(const PlanarDelaunay& pd, int a, int b);
ChewPath planar_chew(const std::vector<ExactVector>& points, int a, int b);

/// Decides sum |steps[k]| <= sqrt(bound_sq) exactly for up to two steps and
/// with outward-rounded intervals otherwise, doubling the precision up to 256
/// bits before throwing kUndecidable.
bool total_length_at_most(const std::vector<ExactVector>& steps, const Rational& bound_sq);

/// The path is at most sqrt(10) times as long as its target.
bool within_sqrt10(const ChewPath& p);

/// Number of path edges parallel to gamma's holonomy.
std::size_t follows_parallel_count(const ChewPath& p, const SaddleConnection& gamma);

std::string chew_to_json(const ChewPath& p);

}  // namespace saddlekit
