#include "saddlekit/surface.hpp"

#include <algorithm>
#include <list>
#include <map>
#include <optional>

#include "saddlekit/error.hpp"

namespace saddlekit {

TranslationSurface::TranslationSurface(std::vector<Triangle> triangles,
                                       std::vector<std::array<EdgeSlot, 3>> gluing)
    : triangles_(std::move(triangles)), gluing_(std::move(gluing)) {
  if (triangles_.empty()) {
    throw Error(ErrorCode::kMalformed, "surface has no triangles");
  }
  if (gluing_.size() != triangles_.size()) {
    throw Error(ErrorCode::kMalformed, "gluing table size does not match triangle count");
  }
  const int n = static_cast<int>(triangles_.size());
  for (const auto& row : gluing_) {
    for (const EdgeSlot& slot : row) {
      if (slot.triangle < 0 || slot.triangle >= n || slot.edge < 0 || slot.edge > 2) {
        throw Error(ErrorCode::kMalformed, "gluing refers to a slot out of range");
      }
    }
  }
}

ExactVector TranslationSurface::corner_offset(int t, int i) const {
  const Triangle& tri = triangle(t);
  switch (i) {
    case 0: return {0, 0};
    case 1: return tri.edges[0];
    default: return tri.edges[0] + tri.edges[1];
  }
}

EdgeSlot next_corner_ccw(const TranslationSurface& s, EdgeSlot corner) {
  // The wedge at (t,i) ends along edge i-1 reversed; crossing that edge lands
  // in the partner triangle at the corner where the partner edge starts.
  return s.partner({corner.triangle, prev_edge(corner.edge)});
}

EdgeSlot next_corner_cw(const TranslationSurface& s, EdgeSlot corner) {
  const EdgeSlot across = s.partner(corner);
  return {across.triangle, next_edge(across.edge)};
}

namespace {

void check_involutive(const TranslationSurface& s) {
  const int n = static_cast<int>(s.triangle_count());
  for (int t = 0; t < n; ++t) {
    for (int i = 0; i < 3; ++i) {
      const EdgeSlot slot{t, i};
      const EdgeSlot other = s.partner(slot);
      if (other == slot || s.partner(other) != slot) {
        throw Error(ErrorCode::kGluingNotInvolutive,
                    "gluing of slot (" + std::to_string(t) + "," + std::to_string(i) +
                        ") is not an involution without fixed points");
      }
    }
  }
}

}  // namespace

Topology compute_topology(const TranslationSurface& s) {
  check_involutive(s);
  Topology topo;
  const int n = static_cast<int>(s.triangle_count());
  topo.corner_vertex.assign(static_cast<std::size_t>(n), {-1, -1, -1});
  for (int t = 0; t < n; ++t) {
    for (int i = 0; i < 3; ++i) {
      if (topo.corner_vertex[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] >= 0) continue;
      const int id = topo.vertex_count++;
      std::vector<EdgeSlot> cycle;
      int wraps = 0;
      EdgeSlot corner{t, i};
      do {
        topo.corner_vertex[static_cast<std::size_t>(corner.triangle)][static_cast<std::size_t>(corner.edge)] = id;
        cycle.push_back(corner);
        const ExactVector& start = s.edge(corner);
        const ExactVector end = -s.edge({corner.triangle, prev_edge(corner.edge)});
        if (half_plane(start) == 1 && half_plane(end) == 0) ++wraps;
        corner = next_corner_ccw(s, corner);
        if (cycle.size() > static_cast<std::size_t>(3 * n)) {
          throw Error(ErrorCode::kMalformed, "corner cycle does not close");
        }
      } while (corner != EdgeSlot{t, i});
      topo.vertex_corners.push_back(std::move(cycle));
      topo.cone_turns.push_back(wraps);
    }
  }
  topo.face_count = n;
  topo.edge_count = 3 * n / 2;
  const int euler = topo.vertex_count - topo.edge_count + topo.face_count;
  topo.genus = (2 - euler) / 2;
  return topo;
}

StratumSignature validate(const TranslationSurface& s) {
  check_involutive(s);
  const int n = static_cast<int>(s.triangle_count());
  for (int t = 0; t < n; ++t) {
    for (int i = 0; i < 3; ++i) {
      const EdgeSlot slot{t, i};
      if (!(s.edge(slot) + s.edge(s.partner(slot))).is_zero()) {
        throw Error(ErrorCode::kGluingNotOpposite,
                    "glued edges are not opposite at triangle " + std::to_string(t));
      }
    }
  }
  for (int t = 0; t < n; ++t) {
    const Triangle& tri = s.triangle(t);
    if (!(tri.edges[0] + tri.edges[1] + tri.edges[2]).is_zero()) {
      throw Error(ErrorCode::kEdgeSum, "edge vectors of triangle " + std::to_string(t) +
                                           " do not sum to zero");
    }
    if (sgn(tri.doubled_area()) <= 0) {
      throw Error(ErrorCode::kNonpositiveArea,
                  "triangle " + std::to_string(t) + " has nonpositive area");
    }
  }
  const Topology topo = compute_topology(s);
  StratumSignature sig;
  int order_sum = 0;
  for (int turns : topo.cone_turns) {
    if (turns < 1) {
      throw Error(ErrorCode::kConeAngle, "cone angle is not a positive multiple of 2pi");
    }
    sig.zero_orders.push_back(turns - 1);
    order_sum += turns - 1;
  }
  const int euler = topo.vertex_count - topo.edge_count + topo.face_count;
  if (euler % 2 != 0 || order_sum != 2 * topo.genus - 2) {
    throw Error(ErrorCode::kConeAngle, "zero orders do not sum to 2g-2");
  }
  std::sort(sig.zero_orders.begin(), sig.zero_orders.end());
  sig.genus = topo.genus;
  sig.marked_points = topo.vertex_count;
  sig.relative_dimension = 2 * topo.genus + topo.vertex_count - 1;
  return sig;
}

Rational area(const TranslationSurface& s) {
  Rational twice = 0;
  for (const Triangle& tri : s.triangles()) twice += tri.doubled_area();
  return twice / 2;
}

TranslationSurface apply_surface(const ExactMatrix& m, const TranslationSurface& s) {
  if (sgn(m.det()) == 0) {
    throw Error(ErrorCode::kSingularMatrix, "cannot act by a singular matrix");
  }
  std::vector<Triangle> triangles;
  triangles.reserve(s.triangle_count());
  std::vector<std::array<EdgeSlot, 3>> gluing = s.gluing();
  if (sgn(m.det()) > 0) {
    for (const Triangle& tri : s.triangles()) {
      triangles.push_back({{apply_matrix(m, tri.edges[0]), apply_matrix(m, tri.edges[1]),
                            apply_matrix(m, tri.edges[2])}});
    }
  } else {
    // Reflection: corners (A,B,C) become (A,C,B); old edge i -> new edge 2-i.
    for (const Triangle& tri : s.triangles()) {
      triangles.push_back({{-apply_matrix(m, tri.edges[2]), -apply_matrix(m, tri.edges[1]),
                            -apply_matrix(m, tri.edges[0])}});
    }
    for (std::size_t t = 0; t < gluing.size(); ++t) {
      const auto old = s.gluing()[t];
      for (int i = 0; i < 3; ++i) {
        EdgeSlot p = old[static_cast<std::size_t>(2 - i)];
        gluing[t][static_cast<std::size_t>(i)] = {p.triangle, 2 - p.edge};
      }
    }
  }
  return TranslationSurface(std::move(triangles), std::move(gluing));
}

// ---------------------------------------------------------------------------
// Builders

namespace {

// Boundary edge of a polygon being ear-clipped: either an original side or a
// diagonal whose other copy already lives in an emitted triangle.
struct ChainEdge {
  ExactVector vector;
  std::optional<PolygonSide> side;
  std::optional<EdgeSlot> diagonal_partner;
};

bool inside_or_on_triangle(const ExactVector& p, const ExactVector& a, const ExactVector& b,
                           const ExactVector& c) {
  return orient(b - a, p - a) >= 0 && orient(c - b, p - b) >= 0 && orient(a - c, p - c) >= 0;
}

}  // namespace

TranslationSurface from_polygons(const std::vector<Polygon>& polygons,
                                 const std::vector<std::array<PolygonSide, 2>>& side_pairs) {
  std::vector<Triangle> triangles;
  std::vector<std::array<EdgeSlot, 3>> gluing;
  std::map<PolygonSide, EdgeSlot> side_slot;

  auto emit = [&](const ChainEdge& e0, const ChainEdge& e1, const ChainEdge& e2) {
    const int t = static_cast<int>(triangles.size());
    triangles.push_back({{e0.vector, e1.vector, e2.vector}});
    gluing.push_back({EdgeSlot{-1, -1}, EdgeSlot{-1, -1}, EdgeSlot{-1, -1}});
    const ChainEdge* es[3] = {&e0, &e1, &e2};
    for (int i = 0; i < 3; ++i) {
      if (es[i]->side) side_slot[*es[i]->side] = {t, i};
      if (es[i]->diagonal_partner) {
        const EdgeSlot other = *es[i]->diagonal_partner;
        gluing[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = other;
        gluing[static_cast<std::size_t>(other.triangle)][static_cast<std::size_t>(other.edge)] = {t, i};
      }
    }
    return t;
  };

  for (int p = 0; p < static_cast<int>(polygons.size()); ++p) {
    const Polygon& poly = polygons[static_cast<std::size_t>(p)];
    if (poly.sides.size() < 3) {
      throw Error(ErrorCode::kMalformed, "polygon needs at least three sides");
    }
    std::vector<ChainEdge> chain;
    for (int k = 0; k < static_cast<int>(poly.sides.size()); ++k) {
      chain.push_back({poly.sides[static_cast<std::size_t>(k)], PolygonSide{p, k}, std::nullopt});
    }
    while (chain.size() > 3) {
      const std::size_t m = chain.size();
      std::vector<ExactVector> verts(m);
      for (std::size_t k = 1; k < m; ++k) verts[k] = verts[k - 1] + chain[k - 1].vector;
      bool clipped = false;
      for (std::size_t k = 0; k < m && !clipped; ++k) {
        // Ear with corners verts[k], verts[k+1], verts[k+2].
        const std::size_t k1 = (k + 1) % m;
        const std::size_t k2 = (k + 2) % m;
        if (orient(chain[k].vector, chain[k1].vector) <= 0) continue;
        bool blocked = false;
        for (std::size_t j = 0; j < m && !blocked; ++j) {
          if (j == k || j == k1 || j == k2) continue;
          blocked = inside_or_on_triangle(verts[j], verts[k], verts[k1], verts[k2]);
        }
        if (blocked) continue;
        const ExactVector diag = verts[k2] - verts[k];
        ChainEdge closing{-diag, std::nullopt, std::nullopt};
        const int t = emit(chain[k], chain[k1], closing);
        ChainEdge replacement{diag, std::nullopt, EdgeSlot{t, 2}};
        if (k1 == 0) {
          // The ear wrapped around the list end: chain[m-1] and chain[0].
          chain.erase(chain.begin());
          chain.back() = replacement;
        } else {
          chain[k] = replacement;
          chain.erase(chain.begin() + static_cast<std::ptrdiff_t>(k1));
        }
        clipped = true;
      }
      if (!clipped) throw Error(ErrorCode::kMalformed, "polygon has no ear (not simple?)");
    }
    emit(chain[0], chain[1], chain[2]);
  }

  for (const auto& pair : side_pairs) {
    auto a = side_slot.find(pair[0]);
    auto b = side_slot.find(pair[1]);
    if (a == side_slot.end() || b == side_slot.end()) {
      throw Error(ErrorCode::kMalformed, "side pair refers to an unknown polygon side");
    }
    gluing[static_cast<std::size_t>(a->second.triangle)][static_cast<std::size_t>(a->second.edge)] = b->second;
    gluing[static_cast<std::size_t>(b->second.triangle)][static_cast<std::size_t>(b->second.edge)] = a->second;
  }
  for (const auto& row : gluing) {
    for (const EdgeSlot& slot : row) {
      if (slot.triangle < 0) throw Error(ErrorCode::kMalformed, "polygon side left unglued");
    }
  }
  return TranslationSurface(std::move(triangles), std::move(gluing));
}

TranslationSurface square_torus() {
  std::vector<Triangle> triangles = {
      {{ExactVector(1, 0), ExactVector(0, 1), ExactVector(-1, -1)}},
      {{ExactVector(1, 1), ExactVector(-1, 0), ExactVector(0, -1)}},
  };
  std::vector<std::array<EdgeSlot, 3>> gluing = {
      {EdgeSlot{1, 1}, EdgeSlot{1, 2}, EdgeSlot{1, 0}},
      {EdgeSlot{0, 2}, EdgeSlot{0, 0}, EdgeSlot{0, 1}},
  };
  return TranslationSurface(std::move(triangles), std::move(gluing));
}

TranslationSurface lattice_torus(const ExactMatrix& g) { return apply_surface(g, square_torus()); }

TranslationSurface octagon_surface() {
  Polygon octagon{{ExactVector(1, 0), ExactVector(1, 1), ExactVector(0, 1), ExactVector(-1, 1),
                   ExactVector(-1, 0), ExactVector(-1, -1), ExactVector(0, -1), ExactVector(1, -1)}};
  std::vector<std::array<PolygonSide, 2>> pairs;
  for (int k = 0; k < 4; ++k) pairs.push_back({PolygonSide{0, k}, PolygonSide{0, k + 4}});
  return from_polygons({octagon}, pairs);
}

namespace {

// One unit-square torus with marked points at the origin and at w, split into
// four triangles around w. Triangle 3 edge 1 and triangle 0 edge 2 carry the
// segment origin -> w.
void append_marked_square(const ExactVector& w, std::vector<Triangle>& triangles,
                          std::vector<std::array<EdgeSlot, 3>>& gluing) {
  if (!(sgn(w.x) > 0 && w.x < 1 && sgn(w.y) > 0 && w.y < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "marked point must lie strictly inside the unit square");
  }
  const int o = static_cast<int>(triangles.size());
  const ExactVector one_zero(1, 0), one_one(1, 1), zero_one(0, 1);
  triangles.push_back({{one_zero, w - one_zero, -w}});
  triangles.push_back({{zero_one, w - one_one, one_zero - w}});
  triangles.push_back({{ExactVector(-1, 0), w - zero_one, one_one - w}});
  triangles.push_back({{ExactVector(0, -1), w, zero_one - w}});
  gluing.push_back({EdgeSlot{o + 2, 0}, EdgeSlot{o + 1, 2}, EdgeSlot{o + 3, 1}});
  gluing.push_back({EdgeSlot{o + 3, 0}, EdgeSlot{o + 2, 2}, EdgeSlot{o + 0, 1}});
  gluing.push_back({EdgeSlot{o + 0, 0}, EdgeSlot{o + 3, 2}, EdgeSlot{o + 1, 1}});
  gluing.push_back({EdgeSlot{o + 1, 0}, EdgeSlot{o + 0, 2}, EdgeSlot{o + 2, 1}});
}

}  // namespace

TranslationSurface marked_torus(const ExactVector& w, const ExactMatrix& g) {
  std::vector<Triangle> triangles;
  std::vector<std::array<EdgeSlot, 3>> gluing;
  append_marked_square(w, triangles, gluing);
  return apply_surface(g, TranslationSurface(std::move(triangles), std::move(gluing)));
}

TranslationSurface slit_torus(const ExactVector& w, const ExactMatrix& g) {
  std::vector<Triangle> triangles;
  std::vector<std::array<EdgeSlot, 3>> gluing;
  append_marked_square(w, triangles, gluing);
  append_marked_square(w, triangles, gluing);
  // Cut both copies along the segment 0 -> w and reglue crosswise.
  gluing[3][1] = {4, 2};
  gluing[4][2] = {3, 1};
  gluing[7][1] = {0, 2};
  gluing[0][2] = {7, 1};
  return apply_surface(g, TranslationSurface(std::move(triangles), std::move(gluing)));
}

}  // namespace saddlekit
