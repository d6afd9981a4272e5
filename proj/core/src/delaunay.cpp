#include "saddlekit/delaunay.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <random>

#include <json.hpp>

#include "saddlekit/error.hpp"

namespace saddlekit {

namespace {

// In u = x + y, v = x - y an L1 ball of radius r is the axis-parallel square
// of half-side r, so a diamond through three points is a square with the
// three points on its boundary. Any such square has side at least the larger
// bounding-box extent S, and one of side exactly S exists whenever any does.
std::optional<DiamondCertificate> smallest_diamond(const ExactVector& p1, const ExactVector& p2,
                                                   const ExactVector& p3) {
  if (sign(cross(p2 - p1, p3 - p1)) == 0) {
    throw Error(ErrorCode::kCollinear, "diamond of collinear points");
  }
  const std::array<Rational, 3> u{p1.x + p1.y, p2.x + p2.y, p3.x + p3.y};
  const std::array<Rational, 3> v{p1.x - p1.y, p2.x - p2.y, p3.x - p3.y};
  const Rational u_min = std::min({u[0], u[1], u[2]});
  const Rational u_max = std::max({u[0], u[1], u[2]});
  const Rational v_min = std::min({v[0], v[1], v[2]});
  const Rational v_max = std::max({v[0], v[1], v[2]});
  const Rational width = u_max - u_min;
  const Rational height = v_max - v_min;
  const Rational side = std::max(width, height);
  // Lower-left corner positions that put some point on a side.
  auto candidates = [&](const std::array<Rational, 3>& w, const Rational& lo_end,
                        const Rational& hi_end, bool tight) {
    std::vector<Rational> out;
    if (tight) {
      out.push_back(lo_end);
      return out;
    }
    for (const Rational& x : w) {
      for (const Rational& c : {x, Rational(x - side)}) {
        if (c >= hi_end - side && c <= lo_end &&
            std::find(out.begin(), out.end(), c) == out.end()) {
          out.push_back(c);
        }
      }
    }
    return out;
  };
  auto all_on = [&](const std::array<Rational, 3>& w, const Rational& lo, const Rational& hi) {
    for (const Rational& x : w) {
      if (x != lo && x != hi) return false;
    }
    return true;
  };
  // A square can slide when every point sits on the two sides that stay put.
  if ((width < side && all_on(v, v_min, v_max)) || (height < side && all_on(u, u_min, u_max))) {
    throw Error(ErrorCode::kAmbiguousDiamond, "no unique smallest diamond through the points");
  }
  const auto as = candidates(u, u_min, u_max, width == side);
  const auto bs = candidates(v, v_min, v_max, height == side);
  std::optional<DiamondCertificate> found;
  for (const Rational& a : as) {
    for (const Rational& b : bs) {
      bool boundary = true;
      for (std::size_t k = 0; k < 3 && boundary; ++k) {
        boundary = u[k] == a || u[k] == a + side || v[k] == b || v[k] == b + side;
      }
      if (!boundary) continue;
      const Rational cu = a + side / 2;
      const Rational cv = b + side / 2;
      DiamondCertificate d{{(cu + cv) / 2, (cu - cv) / 2}, side / 2};
      if (found && !(d == *found)) {
        throw Error(ErrorCode::kAmbiguousDiamond, "no unique smallest diamond through the points");
      }
      found = std::move(d);
    }
  }
  return found;
}

}  // namespace

DiamondCertificate diamond_of(const ExactVector& p1, const ExactVector& p2, const ExactVector& p3) {
  auto d = smallest_diamond(p1, p2, p3);
  if (!d) throw Error(ErrorCode::kAmbiguousDiamond, "no diamond passes through the points");
  return *d;
}

int diamond_side(const DiamondCertificate& d, const ExactVector& q) {
  const Rational dist = (q - d.center).norm_l1();
  return dist < d.radius_l1 ? -1 : (dist == d.radius_l1 ? 0 : 1);
}

namespace {

template <typename Surface>
EdgeQuad quad_of(const Surface& s, EdgeSlot edge) {
  const EdgeSlot other = s.partner(edge);
  EdgeQuad q;
  q.a = ExactVector(0, 0);
  q.b = s.edge(edge);
  q.c = q.b + s.edge({edge.triangle, next_edge(edge.edge)});
  q.d = s.edge({other.triangle, next_edge(other.edge)});
  return q;
}

}  // namespace

EdgeQuad develop_quad(const TranslationSurface& s, EdgeSlot edge) { return quad_of(s, edge); }

namespace {

// Side of the fourth vertex against the smallest diamond of the triangle. A
// triangle with no diamond at all counts as violated. On a tie the
// neighbor's diamond is tested against the third corner instead.
int quad_side(const EdgeQuad& q) {
  try {
    const auto d = smallest_diamond(q.a, q.b, q.c);
    return d ? diamond_side(*d, q.d) : -1;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kAmbiguousDiamond) throw;
  }
  const auto d = smallest_diamond(q.b, q.a, q.d);
  return d ? diamond_side(*d, q.c) : -1;
}

// Euclidean in-circle test: positive when d is strictly inside the circle
// through a, b, c.
int in_circle(const EdgeQuad& q) {
  const ExactVector a = q.a - q.d;
  const ExactVector b = q.b - q.d;
  const ExactVector c = q.c - q.d;
  return sign(a.norm_sq() * cross(b, c) - b.norm_sq() * cross(a, c) + c.norm_sq() * cross(a, b));
}

bool strictly_convex(const EdgeQuad& q) {
  const ExactVector cd = q.d - q.c;
  return orient(cd, q.a - q.c) * orient(cd, q.b - q.c) < 0;
}

bool wants_flip(const EdgeQuad& q, bool euclidean) {
  if (euclidean) return in_circle(q) > 0;
  const int side = quad_side(q);
  if (side > 0) return false;
  if (side == 0 && !((q.c - q.d).norm_sq() < (q.b - q.a).norm_sq())) return false;
  return strictly_convex(q);
}

struct Mesh {
  std::vector<Triangle> tris;
  std::vector<std::array<EdgeSlot, 3>> glue;

  EdgeSlot& partner(EdgeSlot e) {
    return glue[static_cast<std::size_t>(e.triangle)][static_cast<std::size_t>(e.edge)];
  }
  EdgeSlot partner(EdgeSlot e) const {
    return glue[static_cast<std::size_t>(e.triangle)][static_cast<std::size_t>(e.edge)];
  }
  const ExactVector& edge(EdgeSlot e) const {
    return tris[static_cast<std::size_t>(e.triangle)].edges[static_cast<std::size_t>(e.edge)];
  }
};

// Replaces the diagonal AB of the quad (t = ABC, t' = BAD) by CD. Afterwards
// t = (C, A, D) and t' = (D, B, C), glued along their edge 2.
void flip(Mesh& m, EdgeSlot e) {
  const int t = e.triangle;
  const int i = e.edge;
  const EdgeSlot o = m.partner(e);
  const int u = o.triangle;
  const int j = o.edge;
  const std::array<EdgeSlot, 4> old_slots{EdgeSlot{t, (i + 2) % 3}, EdgeSlot{u, (j + 1) % 3},
                                          EdgeSlot{u, (j + 2) % 3}, EdgeSlot{t, (i + 1) % 3}};
  const std::array<EdgeSlot, 4> new_slots{EdgeSlot{t, 0}, EdgeSlot{t, 1}, EdgeSlot{u, 0},
                                          EdgeSlot{u, 1}};
  std::array<EdgeSlot, 4> outer;
  std::array<ExactVector, 4> vec;
  for (std::size_t k = 0; k < 4; ++k) {
    outer[k] = m.partner(old_slots[k]);
    vec[k] = m.edge(old_slots[k]);
  }
  const ExactVector diag = -vec[0] - vec[1];  // C - D
  m.tris[static_cast<std::size_t>(t)].edges = {vec[0], vec[1], diag};
  m.tris[static_cast<std::size_t>(u)].edges = {vec[2], vec[3], -diag};
  auto remap = [&](EdgeSlot s) -> std::optional<EdgeSlot> {
    for (std::size_t k = 0; k < 4; ++k) {
      if (old_slots[k] == s) return new_slots[k];
    }
    return std::nullopt;
  };
  std::array<EdgeSlot, 4> new_partner;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto inside = remap(outer[k]);
    new_partner[k] = inside ? *inside : outer[k];
  }
  for (std::size_t k = 0; k < 4; ++k) {
    m.partner(new_slots[k]) = new_partner[k];
    if (!remap(outer[k])) m.partner(outer[k]) = new_slots[k];
  }
  m.partner({t, 2}) = {u, 2};
  m.partner({u, 2}) = {t, 2};
}

std::vector<DiamondCertificate> certify(const TranslationSurface& s) {
  std::vector<DiamondCertificate> out;
  out.reserve(s.triangle_count());
  for (const Triangle& tri : s.triangles()) {
    auto d = smallest_diamond(ExactVector(0, 0), tri.edges[0], tri.edges[0] + tri.edges[1]);
    if (!d) throw Error(ErrorCode::kNotDelaunay, "a triangle has no circumscribing diamond");
    out.push_back(std::move(*d));
  }
  return out;
}

}  // namespace

bool is_locally_delaunay(const TranslationSurface& s, EdgeSlot edge) {
  return quad_side(develop_quad(s, edge)) >= 0;
}

namespace {

// Flipping until a full scan finds nothing to flip. Edges are taken in FIFO
// order, or in random order when `rng` is given.
void flip_until_stable(Mesh& mesh, bool euclidean, std::size_t cap, std::size_t& flips,
                       std::mt19937_64* rng = nullptr) {
  const std::size_t n = mesh.tris.size();
  while (true) {
    std::deque<EdgeSlot> queue;
    std::vector<std::array<bool, 3>> queued(n, {false, false, false});
    auto push = [&](EdgeSlot e) {
      const EdgeSlot c = std::min(e, mesh.partner(e));
      auto& flag = queued[static_cast<std::size_t>(c.triangle)][static_cast<std::size_t>(c.edge)];
      if (!flag) {
        flag = true;
        queue.push_back(c);
      }
    };
    for (int t = 0; t < static_cast<int>(n); ++t) {
      for (int i = 0; i < 3; ++i) {
        if (wants_flip(quad_of(mesh, {t, i}), euclidean)) push({t, i});
      }
    }
    if (queue.empty()) return;
    while (!queue.empty()) {
      if (rng) {
        std::uniform_int_distribution<std::size_t> pick(0, queue.size() - 1);
        std::swap(queue.front(), queue[pick(*rng)]);
      }
      const EdgeSlot e = queue.front();
      queue.pop_front();
      queued[static_cast<std::size_t>(e.triangle)][static_cast<std::size_t>(e.edge)] = false;
      if (!wants_flip(quad_of(mesh, e), euclidean)) continue;
      if (++flips > cap) {
        throw Error(ErrorCode::kFlipCycle,
                    "flip cap of " + std::to_string(cap) + " reached at edge (" +
                        std::to_string(e.triangle) + "," + std::to_string(e.edge) + ")");
      }
      const int u = mesh.partner(e).triangle;
      flip(mesh, e);
      for (const EdgeSlot next : {EdgeSlot{e.triangle, 0}, EdgeSlot{e.triangle, 1}, EdgeSlot{u, 0},
                                  EdgeSlot{u, 1}}) {
        push(next);
      }
    }
  }
}

}  // namespace

DelaunayTriangulation delaunay_l1(const TranslationSurface& s, const DelaunayOptions& options) {
  const std::size_t cap = options.max_flips ? options.max_flips : 200 * s.triangle_count();
  Mesh mesh{s.triangles(), s.gluing()};
  std::size_t flips = 0;
  // Euclidean flipping always terminates and leaves a triangulation close to
  // the L1 one, which keeps the L1 pass short.
  flip_until_stable(mesh, true, cap, flips);
  // L1 flipping can cycle; a few seeded random orders get out of it.
  const Mesh start = mesh;
  const std::size_t base = flips;
  std::mt19937_64 rng(0x5eed);
  for (int attempt = 0;; ++attempt) {
    try {
      flip_until_stable(mesh, false, base + cap, flips, attempt ? &rng : nullptr);
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kFlipCycle || attempt == 8) throw;
      mesh = start;
      flips = base;
    }
  }
  DelaunayTriangulation out;
  out.surface = TranslationSurface(std::move(mesh.tris), std::move(mesh.glue));
  out.certificates = certify(out.surface);
  out.flip_count = flips;
  if (!verify_delaunay(out)) {
    throw Error(ErrorCode::kNotDelaunay, "an edge with a non-convex quad stays non-Delaunay");
  }
  return out;
}

bool verify_delaunay(const DelaunayTriangulation& t) {
  const TranslationSurface& s = t.surface;
  if (t.certificates.size() != s.triangle_count()) return false;
  for (int k = 0; k < static_cast<int>(s.triangle_count()); ++k) {
    const Triangle& tri = s.triangle(k);
    const DiamondCertificate& d = t.certificates[static_cast<std::size_t>(k)];
    const ExactVector b = tri.edges[0];
    const ExactVector c = b + tri.edges[1];
    if (diamond_side(d, ExactVector(0, 0)) != 0 || diamond_side(d, b) != 0 ||
        diamond_side(d, c) != 0) {
      return false;
    }
    for (int i = 0; i < 3; ++i) {
      // The fourth vertex in triangle k's own frame.
      const EdgeQuad q = develop_quad(s, {k, i});
      const ExactVector shift = s.corner_offset(k, i);
      if (diamond_side(d, q.d + shift) < 0) return false;
    }
  }
  return true;
}

std::string delaunay_to_json(const DelaunayTriangulation& t) {
  nlohmann::json doc = nlohmann::json::parse(surface_to_json(t.surface));
  nlohmann::json certs = nlohmann::json::array();
  for (const auto& c : t.certificates) {
    certs.push_back({{"center", {format_rational(c.center.x), format_rational(c.center.y)}},
                     {"radius", format_rational(c.radius_l1)}});
  }
  doc["certificates"] = certs;
  doc["flip_count"] = t.flip_count;
  return doc.dump();
}

std::vector<ExactVector> develop_positions(const TranslationSurface& s) {
  const std::size_t n = s.triangle_count();
  std::vector<std::optional<ExactVector>> pos(n);
  pos[0] = ExactVector(0, 0);
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop_front();
    for (int i = 0; i < 3; ++i) {
      const EdgeSlot o = s.partner({t, i});
      if (pos[static_cast<std::size_t>(o.triangle)]) continue;
      // Corner j+1 of the neighbor sits on corner i of t.
      pos[static_cast<std::size_t>(o.triangle)] = *pos[static_cast<std::size_t>(t)] +
                                                 s.corner_offset(t, i) -
                                                 s.corner_offset(o.triangle, next_edge(o.edge));
      queue.push_back(o.triangle);
    }
  }
  std::vector<ExactVector> out;
  out.reserve(n);
  for (auto& p : pos) {
    if (!p) throw Error(ErrorCode::kMalformed, "surface is not connected");
    out.push_back(std::move(*p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Planar point sets

namespace {

Rational mod_side(const Rational& x, const Rational& side) {
  const Rational q = x / side;
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return x - side * Rational(f);
}

ExactVector mod_side(const ExactVector& v, const Rational& side) {
  return {mod_side(v.x, side), mod_side(v.y, side)};
}

struct Builder {
  Mesh mesh;
  std::vector<ExactVector> pos;  // corner 0 of each triangle inside [0, L]^2

  void set(int t, std::array<ExactVector, 3> edges, ExactVector p) {
    if (t == static_cast<int>(mesh.tris.size())) {
      mesh.tris.push_back({});
      mesh.glue.push_back({});
      pos.push_back({});
    }
    mesh.tris[static_cast<std::size_t>(t)].edges = std::move(edges);
    pos[static_cast<std::size_t>(t)] = std::move(p);
  }
  void glue(EdgeSlot a, EdgeSlot b) {
    mesh.partner(a) = b;
    mesh.partner(b) = a;
  }
  ExactVector offset(int t, int i) const {
    const auto& e = mesh.tris[static_cast<std::size_t>(t)].edges;
    if (i == 0) return {0, 0};
    if (i == 1) return e[0];
    return e[0] + e[1];
  }

  void split_triangle(int t, const ExactVector& d) {
    const auto e = mesh.tris[static_cast<std::size_t>(t)].edges;
    const ExactVector p = pos[static_cast<std::size_t>(t)];
    const std::array<EdgeSlot, 3> outer = mesh.glue[static_cast<std::size_t>(t)];
    const int tb = static_cast<int>(mesh.tris.size());
    const int tc = tb + 1;
    set(t, {e[0], d - e[0], -d}, p);
    set(tb, {e[1], d - e[0] - e[1], e[0] - d}, p + e[0]);
    set(tc, {e[2], d, e[0] + e[1] - d}, p + e[0] + e[1]);
    glue({t, 0}, outer[0]);
    glue({tb, 0}, outer[1]);
    glue({tc, 0}, outer[2]);
    glue({t, 1}, {tb, 2});
    glue({tb, 1}, {tc, 2});
    glue({tc, 1}, {t, 2});
  }

  // q = corner i of t + lambda * e_i with 0 < lambda < 1.
  void split_edge(int t, int i, const Rational& lambda) {
    const EdgeSlot o = mesh.partner({t, i});
    const int u = o.triangle;
    const int j = o.edge;
    const auto e = mesh.tris[static_cast<std::size_t>(t)].edges;
    const auto f = mesh.tris[static_cast<std::size_t>(u)].edges;
    const std::size_t ii = static_cast<std::size_t>(i);
    const std::size_t i1 = static_cast<std::size_t>(next_edge(i));
    const std::size_t i2 = static_cast<std::size_t>(prev_edge(i));
    const std::size_t jj = static_cast<std::size_t>(j);
    const std::size_t j1 = static_cast<std::size_t>(next_edge(j));
    const std::size_t j2 = static_cast<std::size_t>(prev_edge(j));
    const EdgeSlot out_t1 = mesh.partner({t, static_cast<int>(i1)});
    const EdgeSlot out_t2 = mesh.partner({t, static_cast<int>(i2)});
    const EdgeSlot out_u1 = mesh.partner({u, static_cast<int>(j1)});
    const EdgeSlot out_u2 = mesh.partner({u, static_cast<int>(j2)});
    const ExactVector a = pos[static_cast<std::size_t>(t)] + offset(t, i);
    const ExactVector b = pos[static_cast<std::size_t>(u)] + offset(u, j);
    const Rational mu = 1 - lambda;
    const ExactVector q_t = a + lambda * e[ii];
    const ExactVector q_u = b + mu * f[jj];
    // t: (A, q, C) and (q, B, C); u: (B, q, D) and (q, A, D).
    const int t2 = static_cast<int>(mesh.tris.size());
    const int u2 = t2 + 1;
    const ExactVector qc = -(lambda * e[ii]) - e[i2];  // C - q
    set(t, {lambda * e[ii], qc, e[i2]}, a);
    set(t2, {mu * e[ii], e[i1], -(mu * e[ii] + e[i1])}, q_t);
    const ExactVector qd = -(mu * f[jj]) - f[j2];  // D - q
    set(u, {mu * f[jj], qd, f[j2]}, b);
    set(u2, {lambda * f[jj], f[j1], -(lambda * f[jj] + f[j1])}, q_u);
    glue({t, 0}, {u2, 0});
    glue({t2, 0}, {u, 0});
    glue({t, 1}, {t2, 2});
    glue({u, 1}, {u2, 2});
    // Outer partners may themselves be outer slots of the pair.
    const std::array<EdgeSlot, 4> old_slots{EdgeSlot{t, static_cast<int>(i1)}, EdgeSlot{t, static_cast<int>(i2)},
                                            EdgeSlot{u, static_cast<int>(j1)}, EdgeSlot{u, static_cast<int>(j2)}};
    const std::array<EdgeSlot, 4> new_slots{EdgeSlot{t2, 1}, EdgeSlot{t, 2}, EdgeSlot{u2, 1},
                                            EdgeSlot{u, 2}};
    const std::array<EdgeSlot, 4> outer{out_t1, out_t2, out_u1, out_u2};
    for (std::size_t k = 0; k < 4; ++k) {
      EdgeSlot target = outer[k];
      for (std::size_t m = 0; m < 4; ++m) {
        if (old_slots[m] == outer[k]) target = new_slots[m];
      }
      glue(new_slots[k], target);
    }
  }

  void insert(const ExactVector& q) {
    for (int t = 0; t < static_cast<int>(mesh.tris.size()); ++t) {
      const auto& e = mesh.tris[static_cast<std::size_t>(t)].edges;
      const ExactVector d = q - pos[static_cast<std::size_t>(t)];
      const int o0 = orient(e[0], d);
      const int o1 = orient(e[1], d - e[0]);
      const int o2 = orient(e[2], d - e[0] - e[1]);
      if (o0 < 0 || o1 < 0 || o2 < 0) continue;
      const int zeros = (o0 == 0) + (o1 == 0) + (o2 == 0);
      if (zeros == 0) {
        split_triangle(t, d);
        return;
      }
      if (zeros > 1) throw Error(ErrorCode::kInvalidArgument, "repeated point");
      const int i = o0 == 0 ? 0 : (o1 == 0 ? 1 : 2);
      const ExactVector from = offset(t, i);
      const ExactVector& edge = e[static_cast<std::size_t>(i)];
      const Rational lambda = dot(d - from, edge) / edge.norm_sq();
      split_edge(t, i, lambda);
      return;
    }
    throw Error(ErrorCode::kMalformed, "point location failed");
  }
};

}  // namespace

PlanarTorus wrap_planar(const std::vector<ExactVector>& points) {
  if (points.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two points");
  Rational diameter = 0;
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      const Rational d = (points[a] - points[b]).norm_l1();
      if (sign(d) == 0) throw Error(ErrorCode::kInvalidArgument, "repeated point");
      diameter = std::max(diameter, d);
    }
  }
  PlanarTorus out;
  out.points = points;
  out.side = 4 * diameter + 1;
  const Rational& side = out.side;
  Builder b;
  b.set(0, {ExactVector(side, 0), ExactVector(0, side), ExactVector(-side, -side)}, {0, 0});
  b.set(1, {ExactVector(side, side), ExactVector(-side, 0), ExactVector(0, -side)}, {0, 0});
  b.glue({0, 0}, {1, 1});
  b.glue({0, 1}, {1, 2});
  b.glue({0, 2}, {1, 0});
  for (std::size_t k = 1; k < points.size(); ++k) b.insert(mod_side(points[k] - points[0], side));
  out.surface = TranslationSurface(std::move(b.mesh.tris), std::move(b.mesh.glue));
  return out;
}

Rational planar_safe_radius(const PlanarTorus& torus) {
  Rational diameter = 0;
  for (std::size_t a = 0; a < torus.points.size(); ++a) {
    for (std::size_t b = a + 1; b < torus.points.size(); ++b) {
      diameter = std::max(diameter, (torus.points[a] - torus.points[b]).norm_l1());
    }
  }
  return (torus.side - diameter) / 2;
}

std::vector<int> vertex_points(const PlanarTorus& torus, const TranslationSurface& s) {
  const Topology topo = compute_topology(s);
  const std::vector<ExactVector> pos = develop_positions(s);
  const Rational& side = torus.side;
  std::vector<ExactVector> at(static_cast<std::size_t>(topo.vertex_count));
  for (int v = 0; v < topo.vertex_count; ++v) {
    const EdgeSlot c = topo.vertex_corners[static_cast<std::size_t>(v)].front();
    at[static_cast<std::size_t>(v)] =
        mod_side(pos[static_cast<std::size_t>(c.triangle)] + s.corner_offset(c.triangle, c.edge), side);
  }
  if (at.size() != torus.points.size()) {
    throw Error(ErrorCode::kMalformed, "vertex count differs from point count");
  }
  for (std::size_t k = 0; k < torus.points.size(); ++k) {
    // Try the translation that sends point k onto vertex 0.
    const ExactVector shift = at[0] - torus.points[k];
    std::map<ExactVector, int, LexLess> lookup;
    for (std::size_t m = 0; m < torus.points.size(); ++m) {
      lookup.emplace(mod_side(torus.points[m] + shift, side), static_cast<int>(m));
    }
    std::vector<int> out;
    for (const ExactVector& p : at) {
      const auto it = lookup.find(p);
      if (it == lookup.end()) break;
      out.push_back(it->second);
    }
    if (out.size() == at.size()) return out;
  }
  throw Error(ErrorCode::kMalformed, "vertices do not match the point set");
}

namespace {

std::array<int, 3> canonical_triple(std::array<int, 3> t) {
  while (t[0] > t[1] || t[0] > t[2]) std::rotate(t.begin(), t.begin() + 1, t.end());
  return t;
}

}  // namespace

std::vector<std::array<int, 3>> planar_triangles(const PlanarTorus& torus,
                                                 const DelaunayTriangulation& t,
                                                 const Rational& max_radius) {
  const TranslationSurface& s = t.surface;
  const Topology topo = compute_topology(s);
  const std::vector<int> vp = vertex_points(torus, s);
  std::vector<std::array<int, 3>> out;
  for (int k = 0; k < static_cast<int>(s.triangle_count()); ++k) {
    if (t.certificates[static_cast<std::size_t>(k)].radius_l1 > max_radius) continue;
    std::array<int, 3> idx;
    for (int i = 0; i < 3; ++i) idx[static_cast<std::size_t>(i)] = vp[static_cast<std::size_t>(topo.vertex_of({k, i}))];
    const ExactVector& p0 = torus.points[static_cast<std::size_t>(idx[0])];
    bool genuine = true;
    for (int i = 1; i < 3; ++i) {
      if (torus.points[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] - p0 != s.corner_offset(k, i)) genuine = false;
    }
    if (genuine) out.push_back(canonical_triple(idx));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::array<int, 3>> planar_delaunay_brute_force(const std::vector<ExactVector>& points,
                                                            const Rational& max_radius) {
  const int n = static_cast<int>(points.size());
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        const auto& pa = points[static_cast<std::size_t>(a)];
        const auto& pb = points[static_cast<std::size_t>(b)];
        const auto& pc = points[static_cast<std::size_t>(c)];
        const int o = orient(pb - pa, pc - pa);
        if (o == 0) continue;
        DiamondCertificate d;
        try {
          d = diamond_of(pa, pb, pc);
        } catch (const Error&) {
          continue;
        }
        if (d.radius_l1 > max_radius) continue;
        bool empty = true;
        for (int m = 0; m < n && empty; ++m) {
          if (m == a || m == b || m == c) continue;
          if (diamond_side(d, points[static_cast<std::size_t>(m)]) < 0) empty = false;
        }
        if (!empty) continue;
        out.push_back(o > 0 ? std::array<int, 3>{a, b, c} : std::array<int, 3>{a, c, b});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace saddlekit
