#include "saddlekit/sv.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>
#include <vector>

#include <json.hpp>

#include "saddlekit/chew.hpp"
#include "saddlekit/error.hpp"

namespace saddlekit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngularGap = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

// Unit direction at `angle`, exact when the angle is a multiple of pi/4.
struct Ray {
  ExactVector dir;
  bool exact = false;
};

Ray ray_at(double angle) {
  const double k = angle / (kPi / 4);
  const double nearest = std::round(k);
  if (std::abs(k - nearest) < 1e-12) {
    static const int table[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1},
                                    {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
    const int idx = ((static_cast<int>(nearest) % 8) + 8) % 8;
    return {ExactVector(table[idx][0], table[idx][1]), true};
  }
  return {ExactVector(from_double(std::cos(angle)), from_double(std::sin(angle))), false};
}

// Sign of cross(ray, v); `near` is set when v lies within the angular gap of
// an approximated ray.
int ray_side(const Ray& ray, const ExactVector& v, bool& near) {
  const Rational c = cross(ray.dir, v);
  near = false;
  if (!ray.exact) {
    static const Rational gap_sq = from_double(kAngularGap * kAngularGap);
    near = c * c <= gap_sq * ray.dir.norm_sq() * v.norm_sq();
  }
  return sgn(c);
}

// Closed angular range [center - half, center + half]. A side test that is
// within the gap is tried both ways; disagreement means ambiguous.
Membership in_cone(double center, double half, const ExactVector& v) {
  if (half >= kPi) return Membership::kIn;
  bool near_lo = false;
  bool near_hi = false;
  const int a = ray_side(ray_at(center - half), v, near_lo);
  const int b = -ray_side(ray_at(center + half), v, near_hi);
  auto decide = [&](int sa, int sb) {
    return half <= kPi / 2 ? (sa >= 0 && sb >= 0) : (sa >= 0 || sb >= 0);
  };
  bool seen_in = false;
  bool seen_out = false;
  for (const int sa : near_lo ? std::vector<int>{-1, 1} : std::vector<int>{a}) {
    for (const int sb : near_hi ? std::vector<int>{-1, 1} : std::vector<int>{b}) {
      (decide(sa, sb) ? seen_in : seen_out) = true;
    }
  }
  if (seen_in && seen_out) return Membership::kAmbiguous;
  return seen_in ? Membership::kIn : Membership::kOut;
}

Membership both(Membership a, Membership b) {
  if (a == Membership::kOut || b == Membership::kOut) return Membership::kOut;
  if (a == Membership::kAmbiguous || b == Membership::kAmbiguous) return Membership::kAmbiguous;
  return Membership::kIn;
}

// Membership from a signed margin (positive inside).
Membership by_margin(double m, double delta) {
  if (m > delta) return Membership::kIn;
  if (m < -delta) return Membership::kOut;
  return Membership::kAmbiguous;
}

Membership cone_float(double center, double half, double x, double y, double delta) {
  if (half >= kPi) return Membership::kIn;
  // Signed distance to the two boundary rays, positive inside.
  const double lo = center - half;
  const double hi = center + half;
  const double a = std::cos(lo) * y - std::sin(lo) * x;
  const double b = std::sin(hi) * x - std::cos(hi) * y;
  if (half <= kPi / 2) return both(by_margin(a, delta), by_margin(b, delta));
  const Membership ma = by_margin(a, delta);
  const Membership mb = by_margin(b, delta);
  if (ma == Membership::kIn || mb == Membership::kIn) return Membership::kIn;
  if (ma == Membership::kOut && mb == Membership::kOut) return Membership::kOut;
  return Membership::kAmbiguous;
}

Rational rational_above(double x) { return from_double(x * (1 + 1e-9) + 1e-12); }

double parse_angle(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  std::string text = j.get<std::string>();
  const auto pos = text.find("pi");
  if (pos == std::string::npos) return to_double(parse_rational(text));
  text.erase(pos, 2);
  text.erase(std::remove(text.begin(), text.end(), '*'), text.end());
  if (text.empty() || text[0] == '/') text.insert(0, "1");
  if (text == "-" || text.rfind("-/", 0) == 0) text.insert(1, "1");
  return to_double(parse_rational(text)) * kPi;
}

Rational parse_radius(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return from_double(j.get<double>());
  return parse_rational(j.get<std::string>());
}

TestFunction from_json(const nlohmann::json& j) {
  const std::string v = j.at("variant").get<std::string>();
  TestFunction f = DiscIndicator{};
  if (v == "disc") {
    f = DiscIndicator{parse_radius(j.at("r"))};
  } else if (v == "annulus") {
    f = AnnulusIndicator{parse_radius(j.at("r1")), parse_radius(j.at("r2"))};
  } else if (v == "sector") {
    f = SectorIndicator{parse_radius(j.at("r")), parse_angle(j.value("center", nlohmann::json(0))),
                        parse_angle(j.at("half_angle"))};
  } else if (v == "triangle") {
    f = TriangleIndicator{parse_angle(j.value("axis", nlohmann::json(0))),
                          parse_angle(j.at("half_angle")), to_double(parse_radius(j.at("height")))};
  } else if (v == "product") {
    f = make_pair(from_json(j.at("f")), from_json(j.at("g")));
  } else {
    throw Error(ErrorCode::kParse, "unknown test function variant '" + v + "'");
  }
  check_test_function(f);
  return f;
}

nlohmann::json to_json(const TestFunction& f) {
  return std::visit(
      Overloaded{
          [](const DiscIndicator& d) -> nlohmann::json {
            return {{"variant", "disc"}, {"r", format_rational(d.r)}};
          },
          [](const AnnulusIndicator& a) -> nlohmann::json {
            return {{"variant", "annulus"}, {"r1", format_rational(a.r1)}, {"r2", format_rational(a.r2)}};
          },
          [](const SectorIndicator& s) -> nlohmann::json {
            return {{"variant", "sector"}, {"r", format_rational(s.r)}, {"center", s.center},
                    {"half_angle", s.half_angle}};
          },
          [](const TriangleIndicator& t) -> nlohmann::json {
            return {{"variant", "triangle"}, {"axis", t.axis}, {"half_angle", t.half_angle},
                    {"height", t.height}};
          },
          [](const ProductPair& p) -> nlohmann::json {
            return {{"variant", "product"}, {"f", to_json(*p.f)}, {"g", to_json(*p.g)}};
          },
      },
      static_cast<const TestFunction::variant&>(f));
}

bool is_radial(const TestFunction& f) {
  return std::holds_alternative<DiscIndicator>(f) || std::holds_alternative<AnnulusIndicator>(f);
}

std::vector<Membership> memberships(const TestFunction& f, const HolonomySet& set) {
  std::vector<Membership> out;
  out.reserve(set.size());
  for (const auto& c : set.connections) out.push_back(member(f, c.holonomy));
  return out;
}

HolonomySet enumerate_support(const TranslationSurface& s, const TestFunction& f,
                              const EnumerateOptions& options) {
  EnumerateOptions opts = options;
  opts.with_homology = false;
  return std::visit(
      Overloaded{
          [&](const DiscIndicator& d) { return enumerate(s, d.r, opts); },
          [&](const AnnulusIndicator& a) { return enumerate(s, a.r2, opts); },
          [&](const SectorIndicator& sec) { return enumerate(s, sec.r, opts); },
          [&](const TriangleIndicator& t) {
            return enumerate(s, rational_above(t.height / std::cos(t.half_angle)), opts);
          },
          [&](const ProductPair&) -> HolonomySet {
            throw Error(ErrorCode::kInvalidArgument, "a product pair has no planar support");
          },
      },
      static_cast<const TestFunction::variant&>(f));
}

}  // namespace

ProductPair make_pair(TestFunction f, TestFunction g) {
  return ProductPair{std::make_shared<const TestFunction>(std::move(f)),
                     std::make_shared<const TestFunction>(std::move(g))};
}

double support_radius(const TestFunction& f) {
  return std::visit(
      Overloaded{
          [](const DiscIndicator& d) { return to_double(d.r); },
          [](const AnnulusIndicator& a) { return to_double(a.r2); },
          [](const SectorIndicator& s) { return to_double(s.r); },
          [](const TriangleIndicator& t) { return t.height / std::cos(t.half_angle); },
          [](const ProductPair&) -> double {
            throw Error(ErrorCode::kInvalidArgument, "a product pair has no planar support");
          },
      },
      static_cast<const TestFunction::variant&>(f));
}

void check_test_function(const TestFunction& f) {
  auto bad = [](const char* what) { throw Error(ErrorCode::kInvalidArgument, what); };
  std::visit(Overloaded{
                 [&](const DiscIndicator& d) {
                   if (sgn(d.r) < 0) bad("disc radius must be nonnegative");
                 },
                 [&](const AnnulusIndicator& a) {
                   if (sgn(a.r1) < 0 || a.r1 > a.r2) bad("annulus needs 0 <= r1 <= r2");
                 },
                 [&](const SectorIndicator& s) {
                   if (sgn(s.r) < 0) bad("sector radius must be nonnegative");
                   if (!(s.half_angle > 0 && s.half_angle <= kPi)) bad("sector half-angle must lie in (0, pi]");
                   if (!std::isfinite(s.center)) bad("sector center must be finite");
                 },
                 [&](const TriangleIndicator& t) {
                   if (!(t.half_angle > 0 && t.half_angle < kPi / 2)) {
                     bad("triangle half-angle must lie in (0, pi/2)");
                   }
                   if (!(t.height >= 0) || !std::isfinite(t.height)) bad("triangle height must be nonnegative");
                   if (!std::isfinite(t.axis)) bad("triangle axis must be finite");
                 },
                 [&](const ProductPair& p) {
                   if (!p.f || !p.g) bad("product pair needs two factors");
                   check_test_function(*p.f);
                   check_test_function(*p.g);
                 },
             },
             static_cast<const TestFunction::variant&>(f));
}

Membership member(const TestFunction& f, const ExactVector& v) {
  const Rational n = v.norm_sq();
  return std::visit(
      Overloaded{
          [&](const DiscIndicator& d) { return n <= d.r * d.r ? Membership::kIn : Membership::kOut; },
          [&](const AnnulusIndicator& a) {
            return (n > a.r1 * a.r1 && n <= a.r2 * a.r2) ? Membership::kIn : Membership::kOut;
          },
          [&](const SectorIndicator& s) {
            if (n > s.r * s.r) return Membership::kOut;
            return in_cone(s.center, s.half_angle, v);
          },
          [&](const TriangleIndicator& t) {
            const Membership cone = in_cone(t.axis, t.half_angle, v);
            if (cone == Membership::kOut) return cone;
            const double along = std::cos(t.axis) * to_double(v.x) + std::sin(t.axis) * to_double(v.y);
            const double scale = std::max(1.0, std::sqrt(to_double(n)));
            return both(cone, by_margin(t.height - along, kAngularGap * scale));
          },
          [&](const ProductPair&) -> Membership {
            throw Error(ErrorCode::kInvalidArgument, "a product pair takes two vectors");
          },
      },
      static_cast<const TestFunction::variant&>(f));
}

Membership member(const TestFunction& f, double x, double y, double delta) {
  const double len = std::hypot(x, y);
  return std::visit(
      Overloaded{
          [&](const DiscIndicator& d) { return by_margin(to_double(d.r) - len, delta); },
          [&](const AnnulusIndicator& a) {
            return both(by_margin(len - to_double(a.r1), delta), by_margin(to_double(a.r2) - len, delta));
          },
          [&](const SectorIndicator& s) {
            const Membership radial = by_margin(to_double(s.r) - len, delta);
            if (radial == Membership::kOut) return radial;
            return both(radial, cone_float(s.center, s.half_angle, x, y, delta));
          },
          [&](const TriangleIndicator& t) {
            const double along = std::cos(t.axis) * x + std::sin(t.axis) * y;
            const Membership top = by_margin(t.height - along, delta);
            if (top == Membership::kOut) return top;
            return both(top, cone_float(t.axis, t.half_angle, x, y, delta));
          },
          [&](const ProductPair&) -> Membership {
            throw Error(ErrorCode::kInvalidArgument, "a product pair takes two vectors");
          },
      },
      static_cast<const TestFunction::variant&>(f));
}

TestFunction test_function_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    return from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("test function JSON: ") + e.what());
  }
}

std::string test_function_to_json(const TestFunction& f) { return to_json(f).dump(); }

SvValue transform(const TranslationSurface& s, const TestFunction& f, const EnumerateOptions& options) {
  check_test_function(f);
  if (const auto* p = std::get_if<ProductPair>(&f)) return pair_transform(s, *p->f, *p->g, options);
  const HolonomySet set = enumerate_support(s, f, options);
  SvValue out;
  for (const Membership m : memberships(f, set)) {
    if (m == Membership::kIn) ++out.count;
    if (m == Membership::kAmbiguous) ++out.ambiguous;
  }
  out.value = static_cast<double>(out.count);
  return out;
}

SvValue transform_normalized(const TranslationSurface& s, const TestFunction& f, const Rational& area,
                             const EnumerateOptions& options) {
  check_test_function(f);
  if (sgn(area) <= 0) throw Error(ErrorCode::kInvalidArgument, "area must be positive");
  if (area == 1) return transform(s, f, options);
  EnumerateOptions opts = options;
  opts.with_homology = false;
  const double scale = std::sqrt(to_double(area));
  auto in_radius = [&](const Rational& n, const Rational& r) { return n <= r * r * area; };
  const Membership out = Membership::kOut, in = Membership::kIn;
  std::function<Membership(const ExactVector&)> test;
  Rational reach_sq;
  std::visit(
      Overloaded{
          [&](const DiscIndicator& d) {
            reach_sq = d.r * d.r * area;
            test = [&](const ExactVector& v) { return in_radius(v.norm_sq(), d.r) ? in : out; };
          },
          [&](const AnnulusIndicator& a) {
            reach_sq = a.r2 * a.r2 * area;
            test = [&](const ExactVector& v) {
              const Rational n = v.norm_sq();
              return (!in_radius(n, a.r1) && in_radius(n, a.r2)) ? in : out;
            };
          },
          [&](const SectorIndicator& sec) {
            reach_sq = sec.r * sec.r * area;
            test = [&](const ExactVector& v) {
              return in_radius(v.norm_sq(), sec.r) ? in_cone(sec.center, sec.half_angle, v) : out;
            };
          },
          [&](const TriangleIndicator& t) {
            const TriangleIndicator big{t.axis, t.half_angle, t.height * scale};
            const Rational reach = rational_above(big.height / std::cos(big.half_angle));
            reach_sq = reach * reach;
            test = [big](const ExactVector& v) { return member(TestFunction(big), v); };
          },
          [&](const ProductPair&) {
            throw Error(ErrorCode::kInvalidArgument, "a product pair has no planar support");
          },
      },
      static_cast<const TestFunction::variant&>(f));
  const HolonomySet set = enumerate_sq(s, reach_sq, opts);
  SvValue value;
  for (const auto& c : set.connections) {
    const Membership m = test(c.holonomy);
    if (m == Membership::kIn) ++value.count;
    if (m == Membership::kAmbiguous) ++value.ambiguous;
  }
  value.value = static_cast<double>(value.count);
  return value;
}

SvValue pair_transform(const TranslationSurface& s, const TestFunction& f, const TestFunction& g,
                       const EnumerateOptions& options) {
  check_test_function(f);
  check_test_function(g);
  // One enumeration covering both supports; the double sum runs over it.
  const TestFunction& wider = support_radius(f) >= support_radius(g) ? f : g;
  const HolonomySet set = enumerate_support(s, wider, options);
  const std::vector<Membership> mf = memberships(f, set);
  const std::vector<Membership> mg = memberships(g, set);
  SvValue out;
  for (const Membership a : mf) {
    if (a == Membership::kOut) continue;
    for (const Membership b : mg) {
      if (b == Membership::kOut) continue;
      if (a == Membership::kIn && b == Membership::kIn) {
        ++out.count;
      } else {
        ++out.ambiguous;
      }
    }
  }
  out.value = static_cast<double>(out.count);
  return out;
}

AverageValue rotational_average(const TranslationSurface& s, const TestFunction& f, double R, int n,
                                const AverageOptions& options, const EnumerateOptions& enumerate_opts) {
  check_test_function(f);
  if (std::holds_alternative<ProductPair>(f)) {
    throw Error(ErrorCode::kInvalidArgument, "rotational average needs a planar test function");
  }
  if (!(R >= 1) || !std::isfinite(R)) throw Error(ErrorCode::kInvalidArgument, "R must be at least 1");
  if (n < 8) throw Error(ErrorCode::kInvalidArgument, "quadrature needs at least 8 angles");
  if (R == 1 && is_radial(f)) {
    const SvValue v = transform(s, f, enumerate_opts);
    return {v.value, v.ambiguous, v.count + v.ambiguous};
  }
  // |a_R r_t v| >= |v| / R, so longer vectors never reach the support.
  EnumerateOptions opts = enumerate_opts;
  opts.with_homology = false;
  const HolonomySet set = enumerate(s, rational_above(R * support_radius(f)), opts);
  std::vector<std::pair<double, double>> vs;
  vs.reserve(set.size());
  for (const auto& c : set.connections) vs.emplace_back(to_double(c.holonomy.x), to_double(c.holonomy.y));

  const int threads = std::max(1, options.threads);
  struct Tally {
    std::size_t in = 0, ambiguous = 0;
  };
  std::vector<Tally> tally(static_cast<std::size_t>(threads));
  auto work = [&](int w) {
    Tally& t = tally[static_cast<std::size_t>(w)];
    for (int k = w; k < n; k += threads) {
      const double angle = 2 * kPi * k / n;
      const double c = std::cos(angle);
      const double sn = std::sin(angle);
      for (const auto& [x, y] : vs) {
        const Membership m = member(f, R * (c * x - sn * y), (sn * x + c * y) / R, options.delta);
        if (m == Membership::kIn) ++t.in;
        if (m == Membership::kAmbiguous) ++t.ambiguous;
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  AverageValue out;
  std::size_t in = 0;
  for (const Tally& t : tally) {
    in += t.in;
    out.ambiguous += t.ambiguous;
  }
  out.evaluations = in + out.ambiguous;
  out.value = static_cast<double>(in) / n;
  if (static_cast<double>(out.ambiguous) >
      options.max_ambiguous_fraction * static_cast<double>(std::max<std::size_t>(1, out.evaluations))) {
    throw Error(ErrorCode::kAmbiguousMembership,
                std::to_string(out.ambiguous) + " of " + std::to_string(out.evaluations) +
                    " memberships fall inside the safety margin");
  }
  return out;
}

double shrunk_angle(double R, double theta) { return std::atan(std::tan(theta) / (R * R)); }

double triangle_average_kernel(double rho, double R, double theta, double h) {
  // a_R r_t v lies in the cone when the angle phi of r_t v is within
  // theta_R of pi/2, and under the top edge when rho sin(phi) <= h R.
  const double theta_r = shrunk_angle(R, theta);
  const double s = h * R / rho;
  const double cut = s >= 1 ? 0.0 : kPi / 2 - std::asin(s);
  return std::max(0.0, theta_r - cut) / kPi;
}

SectorSandwich sector_sandwich(const TranslationSurface& s, double R, double theta,
                               const EnumerateOptions& options) {
  if (!(theta > 0 && theta <= kPi / 8)) throw Error(ErrorCode::kInvalidArgument, "theta must lie in (0, pi/8]");
  if (!(R >= 2) || !std::isfinite(R)) throw Error(ErrorCode::kInvalidArgument, "R must be at least 2");
  const double theta_r = shrunk_angle(R, theta);
  // The outer triangle reaches vectors up to R / cos(theta_R).
  EnumerateOptions opts = options;
  opts.with_homology = false;
  const HolonomySet set = enumerate(s, rational_above(R / std::cos(theta_r)), opts);
  const Rational r_sq = from_double(R) * from_double(R);
  SectorSandwich out;
  for (const auto& c : set.connections) {
    const Rational n = c.holonomy.norm_sq();
    if (n <= r_sq) ++out.count;
    const double rho = std::sqrt(to_double(n));
    out.lower += triangle_average_kernel(rho, R, theta, std::cos(theta));
    out.upper += triangle_average_kernel(rho, R, theta, 1.0);
  }
  out.scaled = theta_r / kPi * static_cast<double>(out.count);
  out.margin = 1e-12 * static_cast<double>(set.size() + 1);
  if (out.lower > out.scaled + out.margin || out.scaled > out.upper + out.margin) {
    throw Error(ErrorCode::kMarginViolation, "sector sandwich out of order");
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string class_label_name(ClassLabel label) {
  switch (label) {
    case ClassLabel::kH1: return "H1";
    case ClassLabel::kH2: return "H2";
    case ClassLabel::kOmega0: return "Omega0";
    case ClassLabel::kOmega1: return "Omega1";
    case ClassLabel::kOmega2: return "Omega2";
    case ClassLabel::kUnknown: break;
  }
  return "Unknown";
}

namespace {

// Whether the counterclockwise angle at a vertex from direction d1 (in corner
// c1) to direction d2 (in corner c2) is at least pi: sweep corners from d1
// and see whether the half turn -d1 comes no later than d2.
bool ccw_angle_at_least_pi(const TranslationSurface& s, EdgeSlot c1, const ExactVector& d1,
                           EdgeSlot c2, const ExactVector& d2) {
  const ExactVector back = -d1;
  const int max_steps = 3 * static_cast<int>(s.triangle_count());
  EdgeSlot c = c1;
  for (int step = 0; step <= max_steps; ++step) {
    const bool first = step == 0;
    bool has_d2 = c == c2;
    if (has_d2 && first) {
      const int o = orient(d1, d2);
      has_d2 = o > 0 || (o == 0 && sgn(dot(d1, d2)) > 0);
    }
    const bool has_back = !first && corner_contains(s, c, back);
    if (has_d2 && has_back) return orient(d2, back) <= 0;
    if (has_d2) return false;
    if (has_back) return true;
    c = next_corner_ccw(s, c);
  }
  throw Error(ErrorCode::kMalformed, "corner sweep did not return");
}

// Arriving along `in` and leaving along `out` turns by at least pi on both
// sides, so the concatenation is locally geodesic.
bool geodesic_junction(const TranslationSurface& s, const SaddleConnection& in,
                       const SaddleConnection& out) {
  const ExactVector back = -in.holonomy;
  return ccw_angle_at_least_pi(s, out.start_corner, out.holonomy, in.end_corner, back) &&
         ccw_angle_at_least_pi(s, in.end_corner, back, out.start_corner, out.holonomy);
}

bool is_reverse(const SaddleConnection& a, const SaddleConnection& b) {
  return b.holonomy == -a.holonomy && b.start_corner == a.end_corner;
}

bool chain_shorter(const std::vector<const SaddleConnection*>& chain, const Rational& eps_sq) {
  std::vector<ExactVector> steps;
  for (const auto* c : chain) steps.push_back(c->holonomy);
  return total_length_at_most(steps, eps_sq);
}

// A homotopically nontrivial closed curve made of short connections. One or
// two pieces (without backtracking) cannot bound a flat disc; longer chains
// must be locally geodesic at every junction.
std::vector<SaddleConnection> short_closed_chain(const TranslationSurface& s,
                                                 const std::vector<SaddleConnection>& conns,
                                                 const Rational& eps_sq) {
  for (const auto& c : conns) {
    if (c.start == c.end) return {c};
  }
  for (const auto& a : conns) {
    for (const auto& b : conns) {
      if (a.end != b.start || b.end != a.start || is_reverse(a, b)) continue;
      if (chain_shorter({&a, &b}, eps_sq)) return {a, b};
    }
  }
  constexpr std::size_t kMaxPieces = 8;
  const double eps = std::sqrt(to_double(eps_sq));
  std::vector<const SaddleConnection*> chain;
  std::vector<SaddleConnection> found;
  std::function<bool(double)> extend = [&](double length) {
    const SaddleConnection& last = *chain.back();
    const SaddleConnection& first = *chain.front();
    if (chain.size() >= 3 && last.end == first.start && geodesic_junction(s, last, first) &&
        chain_shorter(chain, eps_sq)) {
      for (const auto* c : chain) found.push_back(*c);
      return true;
    }
    if (chain.size() == kMaxPieces) return false;
    for (const auto& next : conns) {
      if (next.start != last.end) continue;
      const double len = length + next.length();
      if (len > eps * (1 + 1e-9)) continue;
      if (std::find(chain.begin(), chain.end(), &next) != chain.end()) continue;
      if (!geodesic_junction(s, last, next)) continue;
      chain.push_back(&next);
      if (extend(len)) return true;
      chain.pop_back();
    }
    return false;
  };
  for (const auto& c : conns) {
    chain = {&c};
    if (extend(c.length())) return found;
  }
  return {};
}

}  // namespace

Classification classify(const TranslationSurface& s, const Rational& epsilon0, const Rational& p,
                        const ClassifyOptions& options) {
  const StratumSignature sig = validate(s);
  if (sgn(epsilon0) <= 0) throw Error(ErrorCode::kInvalidArgument, "epsilon0 must be positive");
  if (sgn(p) <= 0 || p * sig.relative_dimension >= 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "p must lie in (0, 1/" + std::to_string(sig.relative_dimension) + ")");
  }
  Rational max_trace = options.max_trace;
  if (sgn(max_trace) <= 0) max_trace = 64 * Rational(floor_sqrt(area(s)) + 1);

  Classification out;
  out.gamma = shortest(s, options.enumerate);
  const Rational eps_sq = epsilon0 * epsilon0;
  if (out.gamma.length_sq() >= eps_sq) {
    out.label = ClassLabel::kH1;
    return out;
  }

  // Short closed curves: closed chains of short connections, or cylinders
  // whose core is shorter than epsilon0.
  EnumerateOptions opts = options.enumerate;
  opts.with_homology = false;
  std::vector<SaddleConnection> short_conns;
  for (auto& c : enumerate_sq(s, eps_sq, opts).connections) {
    if (c.length_sq() < eps_sq) short_conns.push_back(std::move(c));
  }
  out.short_curve = short_closed_chain(s, short_conns, eps_sq);
  if (out.short_curve.empty()) {
    for (const auto& c : short_conns) {
      const auto core = boundary_core(s, c, epsilon0);
      if (core && core->norm_sq() < eps_sq) {
        out.short_curve = {c};
        out.note = "cylinder core shorter than epsilon0";
        break;
      }
    }
  }
  if (out.short_curve.empty()) {
    out.label = ClassLabel::kH2;
    return out;
  }

  out.second = second_shortest_nonhomologous(s, HomologyTest::kNotPlusMinus, options.enumerate);
  // eps <= |gamma|^p with p = a/b  iff  (eps^2)^b <= (|gamma|^2)^a.
  const unsigned long a = p.get_num().get_ui();
  const unsigned long b = p.get_den().get_ui();
  Rational lhs, rhs;
  const Rational eps2 = out.second->length_sq();
  const Rational gam2 = out.gamma.length_sq();
  mpz_pow_ui(lhs.get_num_mpz_t(), eps2.get_num_mpz_t(), b);
  mpz_pow_ui(lhs.get_den_mpz_t(), eps2.get_den_mpz_t(), b);
  mpz_pow_ui(rhs.get_num_mpz_t(), gam2.get_num_mpz_t(), a);
  mpz_pow_ui(rhs.get_den_mpz_t(), gam2.get_den_mpz_t(), a);
  if (lhs <= rhs) {
    out.label = ClassLabel::kOmega0;
    return out;
  }

  const CylinderResult cyl = detect_cylinder(s, out.gamma, max_trace);
  if (const auto* c = std::get_if<Cylinder>(&cyl)) {
    out.label = ClassLabel::kOmega2;
    out.cylinder = *c;
  } else if (std::holds_alternative<NotOnBoundary>(cyl)) {
    out.label = ClassLabel::kOmega1;
  } else {
    out.label = ClassLabel::kUnknown;
    out.note = std::get<CylinderUnknown>(cyl).reason;
  }
  return out;
}

namespace {

nlohmann::json connection_json(const SaddleConnection& c) {
  return {{"holonomy", {format_rational(c.holonomy.x), format_rational(c.holonomy.y)}},
          {"length_sq", format_rational(c.length_sq())},
          {"length", c.length()},
          {"start", c.start},
          {"end", c.end}};
}

}  // namespace

std::string classification_to_json(const Classification& c) {
  nlohmann::json doc;
  doc["label"] = class_label_name(c.label);
  doc["gamma"] = connection_json(c.gamma);
  if (c.second) {
    doc["second"] = connection_json(*c.second);
    doc["epsilon"] = c.second->length();
  }
  if (!c.short_curve.empty()) {
    nlohmann::json chain = nlohmann::json::array();
    for (const auto& piece : c.short_curve) chain.push_back(connection_json(piece));
    doc["short_curve"] = chain;
  }
  if (c.cylinder) {
    doc["cylinder"] = {{"core", {format_rational(c.cylinder->core.x), format_rational(c.cylinder->core.y)}},
                       {"height_sq", format_rational(c.cylinder->height_sq)},
                       {"width", c.cylinder->width()},
                       {"height", c.cylinder->height()}};
  }
  if (!c.note.empty()) doc["note"] = c.note;
  return doc.dump();
}

}  // namespace saddlekit
