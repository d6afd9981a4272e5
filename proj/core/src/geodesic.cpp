#include "saddlekit/geodesic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <thread>

#include "saddlekit/error.hpp"

namespace saddlekit {

double SaddleConnection::length() const { return std::sqrt(to_double(length_sq())); }

bool canonical_less(const SaddleConnection& a, const SaddleConnection& b) {
  if (a.holonomy != b.holonomy) return length_lex_less(a.holonomy, b.holonomy);
  if (a.start_corner != b.start_corner) return a.start_corner < b.start_corner;
  return a.crossings < b.crossings;
}

std::vector<ExactVector> HolonomySet::distinct_holonomies() const {
  std::vector<ExactVector> out;
  out.reserve(connections.size());
  for (const auto& c : connections) out.push_back(c.holonomy);
  std::sort(out.begin(), out.end(), LexLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t default_state_budget() {
  if (const char* env = std::getenv("SADDLEKIT_BUDGET")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end != env && value > 0) return static_cast<std::size_t>(value);
  }
  return 20'000'000;
}

bool corner_contains(const TranslationSurface& s, EdgeSlot corner, const ExactVector& direction) {
  const ExactVector& start = s.edge(corner);
  const ExactVector end = -s.edge({corner.triangle, prev_edge(corner.edge)});
  const int o = orient(start, direction);
  const bool after_start = o > 0 || (o == 0 && sign(dot(start, direction)) > 0);
  return after_start && orient(direction, end) > 0;
}

namespace {

// Squared distance from the origin to the part of segment [a, b] lying in the
// closed cone spanned by lo (clockwise side) and hi.
Rational clipped_distance_sq(const ExactVector& a, const ExactVector& b, const ExactVector& lo,
                             const ExactVector& hi) {
  const ExactVector ab = b - a;
  // Parameter where the segment meets the line through direction d.
  auto meet = [&](const ExactVector& d) -> Rational {
    const Rational denom = cross(d, ab);
    return -cross(d, a) / denom;
  };
  Rational t0 = 0;
  Rational t1 = 1;
  // Points with cross(lo, p) >= 0 and cross(p, hi) >= 0 are inside the cone.
  // Along the segment these are monotone (a is clockwise of b).
  if (sign(cross(lo, a)) < 0) t0 = meet(lo);
  if (sign(cross(b, hi)) < 0) t1 = meet(hi);
  if (t0 > t1) t0 = t1;
  const Rational ab_sq = ab.norm_sq();
  Rational t = -dot(a, ab) / ab_sq;
  if (t < t0) t = t0;
  if (t > t1) t = t1;
  const ExactVector closest = a + t * ab;
  return closest.norm_sq();
}

struct Node {
  int parent;
  EdgeSlot exit;
};

struct State {
  EdgeSlot entry;  // slot in the triangle being entered
  ExactVector p;   // clockwise endpoint of the entry edge
  ExactVector q;   // counterclockwise endpoint
  ExactVector lo;
  ExactVector hi;
  int node;        // path node of the last exit
};

class CornerSearch {
 public:
  CornerSearch(const TranslationSurface& s, const Topology& topo, const Rational& radius_sq,
               std::atomic<std::size_t>& states, std::size_t cap)
      : s_(s), topo_(topo), radius_sq_(radius_sq), states_(states), cap_(cap) {}

  void run(EdgeSlot corner, std::vector<SaddleConnection>& out) {
    nodes_.clear();
    const int t = corner.triangle;
    const int i = corner.edge;
    const ExactVector p = s_.edge(corner);
    const ExactVector q = -s_.edge({t, prev_edge(i)});
    const int start_vertex = topo_.vertex_of(corner);
    if (p.norm_sq() <= radius_sq_) {
      SaddleConnection c;
      c.holonomy = p;
      c.start = start_vertex;
      c.start_corner = corner;
      const EdgeSlot arrival{t, next_edge(i)};
      c.end = topo_.vertex_of(arrival);
      c.end_corner = next_corner_ccw(s_, arrival);
      out.push_back(std::move(c));
    }
    std::deque<State> queue;
    const EdgeSlot exit{t, next_edge(i)};
    if (clipped_distance_sq(p, q, p, q) <= radius_sq_) {
      nodes_.push_back({-1, exit});
      queue.push_back({s_.partner(exit), p, q, p, q, 0});
    }
    while (!queue.empty()) {
      State st = std::move(queue.front());
      queue.pop_front();
      if (++states_ > cap_) {
        throw Error(ErrorCode::kResourceLimit,
                    "wedge state budget of " + std::to_string(cap_) +
                        " exhausted (connections found so far: " + std::to_string(out.size()) +
                        "); lower the radius or raise --budget");
      }
      const int tt = st.entry.triangle;
      const int j = st.entry.edge;
      const ExactVector v = st.p + s_.edge({tt, next_edge(j)});
      const bool inside = orient(st.lo, v) > 0 && orient(v, st.hi) > 0;
      if (inside && v.norm_sq() <= radius_sq_) {
        SaddleConnection c;
        c.holonomy = v;
        c.start = start_vertex;
        c.start_corner = corner;
        c.end_corner = {tt, prev_edge(j)};
        c.end = topo_.vertex_of(c.end_corner);
        c.crossings = path(st.node);
        out.push_back(std::move(c));
      }
      // Between p and v, through edge j+1.
      {
        const ExactVector& hi = orient(v, st.hi) > 0 ? v : st.hi;
        if (orient(st.lo, hi) > 0 && clipped_distance_sq(st.p, v, st.lo, hi) <= radius_sq_) {
          const EdgeSlot out_slot{tt, next_edge(j)};
          nodes_.push_back({st.node, out_slot});
          queue.push_back({s_.partner(out_slot), st.p, v, st.lo, hi,
                           static_cast<int>(nodes_.size()) - 1});
        }
      }
      // Between v and q, through edge j+2.
      {
        const ExactVector& lo = orient(st.lo, v) > 0 ? v : st.lo;
        if (orient(lo, st.hi) > 0 && clipped_distance_sq(v, st.q, lo, st.hi) <= radius_sq_) {
          const EdgeSlot out_slot{tt, prev_edge(j)};
          nodes_.push_back({st.node, out_slot});
          queue.push_back({s_.partner(out_slot), v, st.q, lo, st.hi,
                           static_cast<int>(nodes_.size()) - 1});
        }
      }
    }
  }

 private:
  std::vector<EdgeSlot> path(int node) const {
    std::vector<EdgeSlot> out;
    for (int k = node; k >= 0; k = nodes_[static_cast<std::size_t>(k)].parent) {
      out.push_back(nodes_[static_cast<std::size_t>(k)].exit);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  const TranslationSurface& s_;
  const Topology& topo_;
  const Rational& radius_sq_;
  std::atomic<std::size_t>& states_;
  std::size_t cap_;
  std::vector<Node> nodes_;
};

}  // namespace

HomologyVector homology_class(const TranslationSurface& s, const EdgeBasis& basis,
                              const SaddleConnection& c) {
  const EdgeSlot corner = c.start_corner;
  HomologyVector cp = basis.zero();
  basis.add(cp, corner);
  if (c.crossings.empty()) return cp;
  HomologyVector cq = basis.zero();
  basis.add(cq, {corner.triangle, prev_edge(corner.edge)}, -1);
  for (std::size_t k = 0; k < c.crossings.size(); ++k) {
    const EdgeSlot entry = s.partner(c.crossings[k]);
    HomologyVector cv = cp;
    basis.add(cv, {entry.triangle, next_edge(entry.edge)});
    if (k + 1 == c.crossings.size()) return cv;
    const EdgeSlot next_exit = c.crossings[k + 1];
    if (next_exit.edge == next_edge(entry.edge)) {
      cq = std::move(cv);
    } else {
      cp = std::move(cv);
    }
  }
  return cp;
}

HolonomySet enumerate_sq(const TranslationSurface& s, const Rational& radius_sq,
                         const EnumerateOptions& options) {
  if (sign(radius_sq) <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "radius must be positive");
  }
  const Topology topo = compute_topology(s);
  const std::size_t cap = options.max_states ? options.max_states : default_state_budget();
  std::vector<EdgeSlot> corners;
  for (int t = 0; t < static_cast<int>(s.triangle_count()); ++t) {
    for (int i = 0; i < 3; ++i) corners.push_back({t, i});
  }
  std::atomic<std::size_t> states{0};
  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(corners.size())));
  std::vector<std::vector<SaddleConnection>> partial(static_cast<std::size_t>(threads));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  auto worker = [&](int w) {
    try {
      CornerSearch search(s, topo, radius_sq, states, cap);
      for (std::size_t k = static_cast<std::size_t>(w); k < corners.size();
           k += static_cast<std::size_t>(threads)) {
        search.run(corners[k], partial[static_cast<std::size_t>(w)]);
      }
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  HolonomySet result;
  result.radius_sq = radius_sq;
  for (auto& part : partial) {
    for (auto& c : part) result.connections.push_back(std::move(c));
  }
  std::sort(result.connections.begin(), result.connections.end(), canonical_less);
  if (options.with_homology) {
    const EdgeBasis basis(s);
    for (auto& c : result.connections) c.homology_class = homology_class(s, basis, c);
  }
  return result;
}

HolonomySet enumerate(const TranslationSurface& s, const Rational& radius,
                      const EnumerateOptions& options) {
  if (sign(radius) <= 0) throw Error(ErrorCode::kInvalidArgument, "radius must be positive");
  return enumerate_sq(s, radius * radius, options);
}

std::size_t count(const TranslationSurface& s, const Rational& radius,
                  const EnumerateOptions& options) {
  EnumerateOptions opts = options;
  opts.with_homology = false;
  return enumerate(s, radius, opts).size();
}

SaddleConnection shortest(const TranslationSurface& s, const EnumerateOptions& options) {
  // Every edge is a saddle connection, so the shortest edge bounds the search.
  Rational bound = s.edge({0, 0}).norm_sq();
  for (const Triangle& tri : s.triangles()) {
    for (const ExactVector& e : tri.edges) bound = std::min<Rational>(bound, e.norm_sq());
  }
  HolonomySet set = enumerate_sq(s, bound, options);
  return set.connections.front();
}

SaddleConnection second_shortest_nonhomologous(const TranslationSurface& s, HomologyTest test,
                                               const EnumerateOptions& options) {
  EnumerateOptions opts = options;
  opts.with_homology = true;
  const EdgeBasis basis(s);
  const RelationLattice lattice(s, basis);
  SaddleConnection gamma = shortest(s, opts);
  gamma.homology_class = homology_class(s, basis, gamma);
  Rational radius_sq = 4 * gamma.length_sq();
  for (int attempt = 0; attempt < 64; ++attempt) {
    const HolonomySet set = enumerate_sq(s, radius_sq, opts);
    for (const SaddleConnection& c : set.connections) {
      const bool related = test == HomologyTest::kNotPlusMinus
                               ? lattice.same_class_up_to_sign(c.homology_class, gamma.homology_class)
                               : lattice.proportional(c.homology_class, gamma.homology_class);
      if (!related) return c;
    }
    radius_sq *= 4;
  }
  throw Error(ErrorCode::kResourceLimit, "no nonhomologous connection found");
}

RayTrace shoot(const TranslationSurface& s, EdgeSlot corner, const ExactVector& direction,
               const Rational& max_length_sq) {
  if (!corner_contains(s, corner, direction)) {
    throw Error(ErrorCode::kInvalidArgument, "direction is not in the corner's wedge");
  }
  const Topology topo = compute_topology(s);
  RayTrace trace;
  const int t = corner.triangle;
  const int i = corner.edge;
  trace.chain.emplace_back(t, -s.corner_offset(t, i));
  SaddleConnection c;
  c.start = topo.vertex_of(corner);
  c.start_corner = corner;
  const ExactVector p0 = s.edge(corner);
  if (orient(p0, direction) == 0) {
    if (p0.norm_sq() > max_length_sq) return trace;
    c.holonomy = p0;
    const EdgeSlot arrival{t, next_edge(i)};
    c.end = topo.vertex_of(arrival);
    c.end_corner = next_corner_ccw(s, arrival);
    trace.hit = true;
    trace.connection = std::move(c);
    return trace;
  }
  ExactVector p = p0;
  ExactVector q = -s.edge({t, prev_edge(i)});
  EdgeSlot exit{t, next_edge(i)};
  const Rational dir_sq = direction.norm_sq();
  while (true) {
    // Distance to where the ray meets the exit edge.
    const ExactVector pq = q - p;
    const Rational scale = cross(p, pq) / cross(direction, pq);
    if (scale * scale * dir_sq > max_length_sq) return trace;
    c.crossings.push_back(exit);
    const EdgeSlot entry = s.partner(exit);
    const int tt = entry.triangle;
    const int j = entry.edge;
    trace.chain.emplace_back(tt, q - s.corner_offset(tt, j));
    const ExactVector v = p + s.edge({tt, next_edge(j)});
    const int o = orient(v, direction);
    if (o == 0) {
      if (v.norm_sq() > max_length_sq) return trace;
      c.holonomy = v;
      c.end_corner = {tt, prev_edge(j)};
      c.end = topo.vertex_of(c.end_corner);
      trace.hit = true;
      trace.connection = std::move(c);
      return trace;
    }
    if (o > 0) {
      // v is clockwise of the ray: continue between v and q.
      exit = {tt, prev_edge(j)};
      p = v;
    } else {
      exit = {tt, next_edge(j)};
      q = v;
    }
  }
}

std::string holonomy_csv(const HolonomySet& set) {
  std::ostringstream out;
  out << "x_num,x_den,y_num,y_den,len_sq_num,len_sq_den,start,end\n";
  for (const auto& c : set.connections) {
    const Rational len = c.length_sq();
    out << c.holonomy.x.get_num().get_str() << ',' << c.holonomy.x.get_den().get_str() << ','
        << c.holonomy.y.get_num().get_str() << ',' << c.holonomy.y.get_den().get_str() << ','
        << len.get_num().get_str() << ',' << len.get_den().get_str() << ',' << c.start << ','
        << c.end << '\n';
  }
  return out.str();
}

}  // namespace saddlekit
