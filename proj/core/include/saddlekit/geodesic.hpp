#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "saddlekit/homology.hpp"
#include "saddlekit/surface.hpp"

namespace saddlekit {

/// An oriented saddle connection. `start_corner` is the corner at the start
/// vertex whose half-open wedge [e_i, -e_{i-1}) contains the holonomy
/// direction; `end_corner` is the corner at the end vertex whose wedge
/// contains the reversed direction.
struct SaddleConnection {
  ExactVector holonomy;
  int start = 0;
  int end = 0;
  EdgeSlot start_corner;
  EdgeSlot end_corner;
  /// Edge slots exited, in order, on the way from start to end.
  std::vector<EdgeSlot> crossings;
  HomologyVector homology_class;

  Rational length_sq() const { return holonomy.norm_sq(); }
  double length() const;
};

/// Canonical order: (|v|^2, x, y, start corner, crossings).
bool canonical_less(const SaddleConnection& a, const SaddleConnection& b);

struct HolonomySet {
  Rational radius_sq;
  std::vector<SaddleConnection> connections;

  std::size_t size() const { return connections.size(); }
  /// Distinct holonomy vectors, lexicographically sorted.
  std::vector<ExactVector> distinct_holonomies() const;
};

struct EnumerateOptions {
  /// Cap on processed wedge states; 0 means "use the default".
  std::size_t max_states = 0;
  int threads = 1;
  bool with_homology = true;
};

/// Default state cap: SADDLEKIT_BUDGET if set, otherwise 20 million.
std::size_t default_state_budget();

/// All saddle connections of Euclidean length <= radius, via wedge
/// propagation from every corner. Throws Error(kResourceLimit) when the
/// state cap is hit.
HolonomySet enumerate(const TranslationSurface& s, const Rational& radius,
                      const EnumerateOptions& options = {});
HolonomySet enumerate_sq(const TranslationSurface& s, const Rational& radius_sq,
                         const EnumerateOptions& options = {});

std::size_t count(const TranslationSurface& s, const Rational& radius,
                  const EnumerateOptions& options = {});

/// Globally shortest connection, ties broken by (|v|^2, x, y).
SaddleConnection shortest(const TranslationSurface& s, const EnumerateOptions& options = {});

enum class HomologyTest {
  kNotPlusMinus,     // class differs from +[gamma] and -[gamma]
  kNotProportional,  // class is not a rational multiple of [gamma]
};

SaddleConnection second_shortest_nonhomologous(const TranslationSurface& s,
                                               HomologyTest test = HomologyTest::kNotPlusMinus,
                                               const EnumerateOptions& options = {});

/// Relative homology class of a connection, recomputed from its crossings.
HomologyVector homology_class(const TranslationSurface& s, const EdgeBasis& basis,
                              const SaddleConnection& c);

/// Result of shooting a straight ray out of a corner.
struct RayTrace {
  bool hit = false;  // false: ran past the length cap
  std::optional<SaddleConnection> connection;
  /// Triangles entered, with the developed position of their corner 0.
  std::vector<std::pair<int, ExactVector>> chain;
};

/// Shoots from the vertex at `corner` in direction `direction`, which must lie
/// in the corner's half-open wedge. Stops at the first vertex hit or once the
/// traveled length exceeds sqrt(max_length_sq).
RayTrace shoot(const TranslationSurface& s, EdgeSlot corner, const ExactVector& direction,
               const Rational& max_length_sq);

/// True when `direction` lies in the half-open wedge of `corner`.
bool corner_contains(const TranslationSurface& s, EdgeSlot corner, const ExactVector& direction);

// ---------------------------------------------------------------------------
// Cylinders

struct Cylinder {
  ExactVector core;        // holonomy of a closed leaf (sum of boundary pieces)
  Rational height_sq;      // squared distance between the two boundaries
  bool cylinder_on_left = true;  // relative to gamma's direction
  std::vector<SaddleConnection> boundary;

  double width() const;
  double height() const;
};
struct NotOnBoundary {};
struct CylinderUnknown {
  std::string reason;
};

using CylinderResult = std::variant<Cylinder, NotOnBoundary, CylinderUnknown>;

/// Looks for a flat cylinder with gamma on its boundary by following the
/// separatrices parallel to gamma on each side of it, up to total length
/// max_trace. On surfaces with rational edge vectors every saddle connection
/// direction is periodic, so a trace that finishes always closes up.
CylinderResult detect_cylinder(const TranslationSurface& s, const SaddleConnection& gamma,
                               const Rational& max_trace);

/// Core holonomy of a cylinder having gamma on its boundary, found by tracing
/// the boundary on the left and then on the right of gamma. Nothing when
/// neither trace closes up within max_trace. No height computation.
std::optional<ExactVector> boundary_core(const TranslationSurface& s, const SaddleConnection& gamma,
                                         const Rational& max_trace);

/// CSV with columns x_num,x_den,y_num,y_den,len_sq_num,len_sq_den,start,end.
std::string holonomy_csv(const HolonomySet& set);

}  // namespace saddlekit
