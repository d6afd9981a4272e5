#include "saddlekit/chew.hpp"

#include <mpfr.h>

#include <optional>
#include <utility>

#include <json.hpp>

#include "saddlekit/error.hpp"

namespace saddlekit {

namespace {

// RAII wrapper; mpfr_t is an array type and cannot live in containers.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

// Outward-rounded enclosure of sum sqrt(|s|^2).
void length_interval(const std::vector<ExactVector>& steps, Mpfr& lo, Mpfr& hi) {
  const mpfr_prec_t prec = mpfr_get_prec(lo.get());
  Mpfr term(prec);
  mpfr_set_zero(lo.get(), 1);
  mpfr_set_zero(hi.get(), 1);
  for (const ExactVector& s : steps) {
    const Rational sq = s.norm_sq();
    mpfr_set_q(term.get(), sq.get_mpq_t(), MPFR_RNDD);
    mpfr_sqrt(term.get(), term.get(), MPFR_RNDD);
    mpfr_add(lo.get(), lo.get(), term.get(), MPFR_RNDD);
    mpfr_set_q(term.get(), sq.get_mpq_t(), MPFR_RNDU);
    mpfr_sqrt(term.get(), term.get(), MPFR_RNDU);
    mpfr_add(hi.get(), hi.get(), term.get(), MPFR_RNDU);
  }
}

void fill_bounds(ChewPath& p) {
  Mpfr lo(64), hi(64), target(64);
  length_interval(p.steps, lo, hi);
  mpfr_sqr(hi.get(), hi.get(), MPFR_RNDU);
  mpq_t q;
  mpq_init(q);
  mpfr_get_q(q, hi.get());
  p.total_length_sq_bound = Rational(q);
  mpq_clear(q);
  mpfr_sqrt(hi.get(), hi.get(), MPFR_RNDU);
  const Rational t_sq = p.target.norm_sq();
  if (sgn(t_sq) == 0) {
    p.ratio_upper_bound = 1.0;
    return;
  }
  mpfr_set_q(target.get(), t_sq.get_mpq_t(), MPFR_RNDD);
  mpfr_sqrt(target.get(), target.get(), MPFR_RNDD);
  mpfr_div(hi.get(), hi.get(), target.get(), MPFR_RNDU);
  p.ratio_upper_bound = mpfr_get_d(hi.get(), MPFR_RNDU);
}

struct Frame {
  ExactMatrix rotate;
  bool mirror = false;

  ExactVector operator()(const ExactVector& v) const {
    ExactVector w = apply_matrix(rotate, v);
    if (mirror) w.y = -w.y;
    return w;
  }
};

// Clockwise position on the diamond boundary, starting at the left corner.
// Corners count as upper points.
Rational clockwise_param(const ExactVector& w, const ExactVector& center, const Rational& r) {
  const Rational dx = w.x - center.x;
  const Rational dy = w.y - center.y;
  if (sgn(dy) >= 0) return r + dx;
  return 3 * r - dx;
}

struct ChainTriangle {
  int triangle;
  std::array<ExactVector, 3> corners;  // developed
  ExactVector center;                  // developed diamond center
  Rational radius;
};

// Case analysis for z = corner `from` on or above beta in frame f. From an
// upper side the path takes the first vertex clockwise; from the lower left
// it takes the first one counterclockwise, usually on the lower right.
int next_vertex(const Frame& f, const ChainTriangle& ct, int from) {
  const ExactVector center = f(ct.center);
  const Rational& r = ct.radius;
  const ExactVector zr = f(ct.corners[static_cast<std::size_t>(from)]);
  const bool upper = zr.y >= center.y;
  if (!upper && zr.x > center.x) {
    throw Error(ErrorCode::kChewCaseFour, "vertex on the lower right of its diamond");
  }
  const Rational tz = clockwise_param(zr, center, r);
  int to = -1;
  std::optional<Rational> best;
  for (int k = 0; k < 3; ++k) {
    if (k == from) continue;
    const Rational tw = clockwise_param(f(ct.corners[static_cast<std::size_t>(k)]), center, r);
    Rational d = upper ? tw - tz : tz - tw;
    if (sgn(d) < 0) d += 4 * r;
    if (!best || d < *best) {
      best = d;
      to = k;
    }
  }
  return to;
}

ChewPath chew_on_chain(const TranslationSurface& s,
                       const std::vector<DiamondCertificate>& certs,
                       const std::vector<std::pair<int, ExactVector>>& chain,
                       const ExactVector& beta) {
  std::vector<ChainTriangle> tris;
  tris.reserve(chain.size());
  for (const auto& [t, p] : chain) {
    const Triangle& tri = s.triangle(t);
    const DiamondCertificate& d = certs[static_cast<std::size_t>(t)];
    tris.push_back({t, {p, p + tri.edges[0], p + tri.edges[0] + tri.edges[1]}, p + d.center,
                    d.radius_l1});
  }
  auto corner_of = [&](std::size_t j, const ExactVector& z) -> int {
    for (int k = 0; k < 3; ++k) {
      if (tris[j].corners[static_cast<std::size_t>(k)] == z) return k;
    }
    return -1;
  };

  // Quarter turn taking beta into the cone |y| <= x.
  Frame frame;
  for (int k = 0; k < 4; ++k) {
    const ExactVector b = apply_matrix(ExactMatrix::quarter_turn(k), beta);
    if (sgn(b.x) > 0 && abs(b.y) <= b.x) {
      frame.rotate = ExactMatrix::quarter_turn(k);
      break;
    }
  }
  const ExactVector beta_r = frame(beta);

  ChewPath path;
  path.target = beta;
  path.vertices.push_back(ExactVector(0, 0));
  auto step_to = [&](std::size_t j, int from, int to) {
    const ChainTriangle& ct = tris[j];
    const int t = ct.triangle;
    EdgeSlot slot{t, from};
    if (next_edge(from) != to) slot = s.partner({t, to});
    const ExactVector& z = ct.corners[static_cast<std::size_t>(from)];
    const ExactVector& w = ct.corners[static_cast<std::size_t>(to)];
    path.edges.push_back(slot);
    path.steps.push_back(w - z);
    path.vertices.push_back(w);
  };

  const std::size_t last = tris.size() - 1;
  ExactVector z(0, 0);
  std::size_t j = 0;
  while (true) {
    std::size_t jmax = j;
    for (std::size_t k = last + 1; k-- > j;) {
      if (corner_of(k, z) >= 0) {
        jmax = k;
        break;
      }
    }
    if (jmax == last) {
      if (z != beta) step_to(last, corner_of(last, z), corner_of(last, beta));
      break;
    }
    const ChainTriangle& ct = tris[jmax];
    const int from = corner_of(jmax, z);
    Frame f = frame;
    f.mirror = sgn(cross(beta_r, frame(z))) < 0;
    const int to = next_vertex(f, ct, from);
    step_to(jmax, from, to);
    z = ct.corners[static_cast<std::size_t>(to)];
    j = jmax;
  }
  fill_bounds(path);
  return path;
}

void append(ChewPath& into, const ChewPath& piece) {
  const ExactVector shift = into.vertices.back();
  into.edges.insert(into.edges.end(), piece.edges.begin(), piece.edges.end());
  into.steps.insert(into.steps.end(), piece.steps.begin(), piece.steps.end());
  for (std::size_t k = 1; k < piece.vertices.size(); ++k) into.vertices.push_back(shift + piece.vertices[k]);
}

}  // namespace

ChewPath chew_path(const DelaunayTriangulation& t, const SaddleConnection& beta) {
  const TranslationSurface& s = t.surface;
  if (t.certificates.size() != s.triangle_count()) {
    throw Error(ErrorCode::kNotDelaunay, "triangulation has no certificates");
  }
  if (beta.start_corner.triangle < 0 ||
      beta.start_corner.triangle >= static_cast<int>(s.triangle_count()) ||
      !corner_contains(s, beta.start_corner, beta.holonomy)) {
    throw Error(ErrorCode::kInvalidArgument, "connection does not start at that corner");
  }
  const RayTrace trace = shoot(s, beta.start_corner, beta.holonomy, beta.length_sq());
  if (!trace.hit || trace.connection->holonomy != beta.holonomy) {
    throw Error(ErrorCode::kInvalidArgument, "not a saddle connection of this surface");
  }
  return chew_on_chain(s, t.certificates, trace.chain, beta.holonomy);
}

PlanarDelaunay planar_delaunay(const std::vector<ExactVector>& points) {
  PlanarDelaunay pd;
  pd.torus = wrap_planar(points);
  pd.delaunay = delaunay_l1(pd.torus.surface);
  pd.vertex_point = vertex_points(pd.torus, pd.delaunay.surface);
  pd.point_vertex.assign(points.size(), -1);
  for (std::size_t v = 0; v < pd.vertex_point.size(); ++v) {
    pd.point_vertex[static_cast<std::size_t>(pd.vertex_point[v])] = static_cast<int>(v);
  }
  return pd;
}

ChewPath planar_chew(const PlanarDelaunay& pd, int a, int b) {
  const auto& pts = pd.torus.points;
  const int n = static_cast<int>(pts.size());
  if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
    throw Error(ErrorCode::kInvalidArgument, "need two distinct point indices");
  }
  const TranslationSurface& s = pd.delaunay.surface;
  const Topology topo = compute_topology(s);
  const ExactVector target = pts[static_cast<std::size_t>(b)] - pts[static_cast<std::size_t>(a)];
  ChewPath out;
  out.target = target;
  out.vertices.push_back(ExactVector(0, 0));
  int current = a;
  while (current != b) {
    const ExactVector rest = pts[static_cast<std::size_t>(b)] - pts[static_cast<std::size_t>(current)];
    const int v = pd.point_vertex[static_cast<std::size_t>(current)];
    std::optional<EdgeSlot> corner;
    for (const EdgeSlot c : topo.vertex_corners[static_cast<std::size_t>(v)]) {
      if (corner_contains(s, c, rest)) corner = c;
    }
    if (!corner) throw Error(ErrorCode::kMalformed, "no corner contains the direction");
    const RayTrace trace = shoot(s, *corner, rest, rest.norm_sq());
    if (!trace.hit) throw Error(ErrorCode::kMalformed, "segment does not reach its endpoint");
    const int next = pd.vertex_point[static_cast<std::size_t>(trace.connection->end)];
    if (pts[static_cast<std::size_t>(current)] + trace.connection->holonomy !=
        pts[static_cast<std::size_t>(next)]) {
      throw Error(ErrorCode::kMalformed, "segment wrapped around the torus");
    }
    append(out, chew_on_chain(s, pd.delaunay.certificates, trace.chain, trace.connection->holonomy));
    current = next;
  }
  fill_bounds(out);
  return out;
}

ChewPath planar_chew(const std::vector<ExactVector>& points, int a, int b) {
  return planar_chew(planar_delaunay(points), a, b);
}

bool total_length_at_most(const std::vector<ExactVector>& steps, const Rational& bound_sq) {
  if (sgn(bound_sq) < 0) return false;
  if (steps.empty()) return true;
  if (steps.size() == 1) return steps[0].norm_sq() <= bound_sq;
  if (steps.size() == 2) {
    // (a + b)^2 <= B  iff  2ab <= B - a^2 - b^2.
    const Rational a2 = steps[0].norm_sq();
    const Rational b2 = steps[1].norm_sq();
    const Rational rest = bound_sq - a2 - b2;
    if (sgn(rest) < 0) return false;
    return 4 * a2 * b2 <= rest * rest;
  }
  for (mpfr_prec_t prec = 64; prec <= 256; prec *= 2) {
    Mpfr lo(prec), hi(prec), bound_lo(prec), bound_hi(prec);
    length_interval(steps, lo, hi);
    mpfr_sqr(lo.get(), lo.get(), MPFR_RNDD);
    mpfr_sqr(hi.get(), hi.get(), MPFR_RNDU);
    mpfr_set_q(bound_lo.get(), bound_sq.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(bound_hi.get(), bound_sq.get_mpq_t(), MPFR_RNDU);
    if (mpfr_lessequal_p(hi.get(), bound_lo.get())) return true;
    if (mpfr_greater_p(lo.get(), bound_hi.get())) return false;
  }
  throw Error(ErrorCode::kUndecidable, "length comparison undecided at 256 bits");
}

bool within_sqrt10(const ChewPath& p) {
  return total_length_at_most(p.steps, 10 * p.target.norm_sq());
}

std::size_t follows_parallel_count(const ChewPath& p, const SaddleConnection& gamma) {
  std::size_t n = 0;
  for (const ExactVector& s : p.steps) {
    if (orient(s, gamma.holonomy) == 0) ++n;
  }
  return n;
}

std::string chew_to_json(const ChewPath& p) {
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t k = 0; k < p.edges.size(); ++k) {
    edges.push_back({{"triangle", p.edges[k].triangle},
                     {"edge", p.edges[k].edge},
                     {"holonomy", {format_rational(p.steps[k].x), format_rational(p.steps[k].y)}}});
  }
  nlohmann::json doc;
  doc["target"] = {format_rational(p.target.x), format_rational(p.target.y)};
  doc["edges"] = edges;
  doc["length_sq_upper"] = format_rational(p.total_length_sq_bound);
  doc["ratio_upper"] = p.ratio_upper_bound;
  doc["within_sqrt10"] = within_sqrt10(p);
  return doc.dump();
}

}  // namespace saddlekit
