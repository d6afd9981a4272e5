#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "saddlekit/chew.hpp"
#include "saddlekit/delaunay.hpp"
#include "saddlekit/error.hpp"
#include "saddlekit/geodesic.hpp"
#include "saddlekit/mc.hpp"
#include "saddlekit/oracle.hpp"
#include "saddlekit/surface.hpp"
#include "saddlekit/sv.hpp"

namespace saddlekit::cli {

namespace {

using nlohmann::json;

struct Flags {
  std::string surface;
  std::string radius;
  std::string eps0;
  std::string p;
  std::string fn;
  std::string radii;
  std::string errors;
  std::string matrix;
  std::string slit;
  std::string format = "json";
  std::size_t samples = 1000;
  std::optional<std::uint64_t> seed;
  double ymax = 50.0;
  double spread = 0.05;
  std::size_t budget = 0;
  int threads = 1;
  int kmax = 100;
};

// "n", "n/d" or a plain decimal such as "-0.125", all exact.
Rational parse_exact(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) return parse_rational(text);
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  const bool neg = !digits.empty() && digits[0] == '-';
  if (neg || (!digits.empty() && digits[0] == '+')) digits.erase(0, 1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorCode::kParse, "not a number: '" + text + "'");
  }
  Integer den = 1;
  for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
  Rational q(Integer(digits), den);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<Rational> parse_list(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& s : split(text, ',')) out.push_back(parse_exact(s));
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const Rational& q : parse_list(text)) out.push_back(to_double(q));
  return out;
}

const CLI::Validator kExact(
    [](std::string& s) -> std::string {
      try {
        parse_exact(s);
        return {};
      } catch (const Error&) {
        return "not an exact number: " + s;
      }
    },
    "Q");

const CLI::Validator kList(
    [](std::string& s) -> std::string {
      try {
        if (parse_list(s).empty()) return "empty list";
        return {};
      } catch (const Error&) {
        return "not a list of numbers: " + s;
      }
    },
    "LIST");

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TranslationSurface load_surface(const Flags& f) { return surface_from_json(read_file(f.surface)); }

// --fn takes inline JSON or @path.
TestFunction load_fn(const Flags& f) {
  if (!f.fn.empty()) {
    return test_function_from_json(f.fn[0] == '@' ? read_file(f.fn.substr(1)) : f.fn);
  }
  if (f.radius.empty()) throw Error(ErrorCode::kInvalidArgument, "give --fn or --radius");
  return DiscIndicator{parse_exact(f.radius)};
}

EnumerateOptions enum_options(const Flags& f) {
  EnumerateOptions o;
  o.max_states = f.budget;
  o.threads = f.threads;
  return o;
}

ExactMatrix load_matrix(const Flags& f) {
  if (f.matrix.empty()) return ExactMatrix::identity();
  const auto v = parse_list(f.matrix);
  if (v.size() != 4) throw Error(ErrorCode::kInvalidArgument, "--matrix takes a,b,c,d");
  return ExactMatrix{v[0], v[1], v[2], v[3]};
}

std::uint64_t seed_of(const Flags& f) {
  if (f.seed) return *f.seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

json vec_json(const ExactVector& v) { return json::array({format_rational(v.x), format_rational(v.y)}); }

std::string csv_cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

// Flat objects become one row; an object with a "rows" array becomes a table.
std::string to_csv(const json& j) {
  std::ostringstream os;
  auto row_table = [&](const json& rows) {
    if (rows.empty()) return;
    bool first = true;
    for (const auto& [k, v] : rows.front().items()) {
      os << (first ? "" : ",") << k;
      first = false;
    }
    os << '\n';
    for (const auto& r : rows) {
      first = true;
      for (const auto& [k, v] : r.items()) {
        os << (first ? "" : ",") << csv_cell(v);
        first = false;
      }
      os << '\n';
    }
  };
  if (j.contains("rows") && j["rows"].is_array()) {
    row_table(j["rows"]);
  } else {
    row_table(json::array({j}));
  }
  return os.str();
}

void emit(const Flags& f, std::ostream& out, const json& j) {
  out << (f.format == "csv" ? to_csv(j) : j.dump() + "\n");
}

void emit_text(const Flags& f, std::ostream& out, const std::string& json_text, const std::string& csv_text) {
  out << (f.format == "csv" ? csv_text : json_text + "\n");
}

// ---------------------------------------------------------------------------
// Commands

void cmd_validate(const Flags& f, std::ostream& out) {
  const TranslationSurface s = load_surface(f);
  const StratumSignature sig = validate(s);
  emit(f, out, {{"valid", true}, {"zero_orders", sig.zero_orders}, {"genus", sig.genus},
                {"marked_points", sig.marked_points}, {"relative_dimension", sig.relative_dimension},
                {"area", format_rational(area(s))}});
}

void cmd_count(const Flags& f, std::ostream& out) {
  const TranslationSurface s = load_surface(f);
  validate(s);
  EnumerateOptions o = enum_options(f);
  o.with_homology = false;
  emit(f, out, {{"count", count(s, parse_exact(f.radius), o)}, {"radius", f.radius}});
}

void cmd_enumerate(const Flags& f, std::ostream& out) {
  const TranslationSurface s = load_surface(f);
  validate(s);
  const HolonomySet set = enumerate(s, parse_exact(f.radius), enum_options(f));
  json conns = json::array();
  for (const auto& c : set.connections) {
    conns.push_back({{"holonomy", vec_json(c.holonomy)}, {"start", c.start}, {"end", c.end}});
  }
  emit_text(f, out, json{{"radius", f.radius}, {"count", set.size()}, {"connections", conns}}.dump(),
            holonomy_csv(set));
}

void cmd_delaunay(const Flags& f, std::ostream& out) {
  const TranslationSurface s = load_surface(f);
  validate(s);
  const std::string text = delaunay_to_json(delaunay_l1(s));
  emit_text(f, out, text, to_csv(json::parse(text)));
}

void cmd_chew_check(const Flags& f, std::ostream& out) {
  const TranslationSurface s = load_surface(f);
  validate(s);
  const DelaunayTriangulation t = delaunay_l1(s);
  EnumerateOptions o = enum_options(f);
  o.with_homology = false;
  const HolonomySet set = enumerate(t.surface, parse_exact(f.radius), o);
  std::size_t violations = 0;
  double worst = 0.0;
  for (const auto& c : set.connections) {
    const ChewPath p = chew_path(t, c);
    if (!within_sqrt10(p)) ++violations;
    worst = std::max(worst, p.ratio_upper_bound);
  }
  emit(f, out, {{"radius", f.radius}, {"checked", set.size()}, {"violations", violations},
                {"worst_ratio_upper", worst}});
}

void cmd_transform(const Flags& f, std::ostream& out) {
  const TranslationSurface s = load_surface(f);
  validate(s);
  const TestFunction fn = load_fn(f);
  const SvValue v = transform(s, fn, enum_options(f));
  emit(f, out, {{"value", v.value}, {"count", v.count}, {"ambiguous", v.ambiguous},
                {"fn", json::parse(test_function_to_json(fn))}});
}

void cmd_classify(const Flags& f, std::ostream& out) {
  const TranslationSurface s = load_surface(f);
  validate(s);
  ClassifyOptions o;
  o.enumerate = enum_options(f);
  const Classification c = classify(s, parse_exact(f.eps0), parse_exact(f.p), o);
  emit(f, out, json::parse(classification_to_json(c)));
}

void cmd_torus_exact(const Flags& f, std::ostream& out) {
  const ExactMatrix g = load_matrix(f);
  const std::vector<ExactVector> vs = torus_holonomy(g, parse_exact(f.radius));
  json hol = json::array();
  for (const auto& v : vs) hol.push_back(vec_json(v));
  emit(f, out, {{"radius", f.radius}, {"count", vs.size()}, {"holonomy", hol},
                {"siegel_constant", siegel_constant_torus()},
                {"measure", json::parse(sv_measure_to_json(sv_measure_torus(12)))}});
}

void cmd_slit_exact(const Flags& f, std::ostream& out) {
  const auto w = parse_list(f.slit);
  if (w.size() != 2) throw Error(ErrorCode::kInvalidArgument, "--slit takes x,y");
  const SlitTorusPoint t{load_matrix(f), ExactVector(w[0], w[1])};
  const SlitHolonomy h = slit_torus_holonomy(t, parse_exact(f.radius));
  json vs = json::array(), cs = json::array();
  for (const auto& v : h.vectors) vs.push_back(vec_json(v));
  for (const auto& v : h.corrections) cs.push_back(vec_json(v));
  emit(f, out, {{"radius", f.radius}, {"count", h.vectors.size()}, {"vectors", vs},
                {"corrections", cs}, {"flagged", h.flagged()}});
}

void tag(SampleReport& r, const char* command, std::uint64_t seed, const Flags& f) {
  r.seed = seed;
  r.parameters["command"] = command;
  r.parameters["samples"] = std::to_string(f.samples);
}

void cmd_mc_torus(const Flags& f, std::ostream& out) {
  const TestFunction fn = load_fn(f);
  const std::uint64_t seed = seed_of(f);
  const auto samples = sample_torus_haar(f.samples, seed, f.ymax, f.threads);
  SampleReport r = estimate_mean_transform(samples, fn, f.threads);
  apply_cusp_correction(r, fn, f.ymax);
  tag(r, "mc-torus", seed, f);
  emit_text(f, out, report_to_json(r), report_to_csv(r));
}

void cmd_mc_stratum(const Flags& f, std::ostream& out) {
  const TranslationSurface base = load_surface(f);
  const TestFunction fn = load_fn(f);
  const std::uint64_t seed = seed_of(f);
  const auto samples = sample_stratum_local(base, f.spread, f.samples, seed, f.threads);
  SampleReport r = estimate_mean_transform(samples, fn, enum_options(f), f.threads);
  tag(r, "mc-stratum", seed, f);
  r.parameters["spread"] = json(f.spread).dump();
  emit_text(f, out, report_to_json(r), report_to_csv(r));
}

std::vector<double> radii_of(const Flags& f) {
  if (!f.radii.empty()) return parse_double_list(f.radii);
  if (!f.radius.empty()) return {to_double(parse_exact(f.radius))};
  throw Error(ErrorCode::kInvalidArgument, "give --radii or --radius");
}

void cmd_variance(const Flags& f, std::ostream& out) {
  const std::vector<double> radii = radii_of(f);
  const std::uint64_t seed = seed_of(f);
  const auto samples = sample_torus_haar(f.samples, seed, f.ymax, f.threads);
  json rows = json::array();
  for (double R : radii) {
    const L2Estimate e = estimate_L2_and_variance(samples, R, f.threads);
    const double main = e.c * std::numbers::pi * R * R;
    const CuspMoments cusp = haar_cusp_moments(DiscIndicator{from_double(R)}, f.ymax);
    const double L_corr = (1.0 - cusp.truncated_mass) * e.L_hat + cusp.truncated_mass * cusp.second_moment;
    rows.push_back({{"R", R}, {"L_hat", e.L_hat}, {"V_hat", e.V_hat},
                    {"sqrt_L_over_piR2", std::sqrt(e.L_hat) / (std::numbers::pi * R * R)},
                    {"abs_dev_over_R2", std::abs(std::sqrt(e.L_hat) - main) / (R * R)},
                    {"L_corrected", L_corr}, {"V_corrected", L_corr - main * main}});
  }
  emit(f, out, {{"rows", rows}, {"seed", seed}, {"rng", kRngName}, {"samples", f.samples},
                {"ymax", f.ymax}});
}

void cmd_tails(const Flags& f, std::ostream& out) {
  const TestFunction fn = load_fn(f);
  const std::uint64_t seed = seed_of(f);
  std::vector<double> values;
  if (!f.surface.empty()) {
    const auto samples = sample_stratum_local(load_surface(f), f.spread, f.samples, seed, f.threads);
    values = stratum_values(samples, fn, enum_options(f), f.threads);
  } else {
    values = torus_values(sample_torus_haar(f.samples, seed, f.ymax, f.threads), fn, f.threads);
  }
  const TailHistogram t = tail_histogram(values, f.kmax);
  json j = json::parse(tail_to_json(t));
  j["seed"] = seed;
  j["rng"] = kRngName;
  j["samples"] = f.samples;
  emit_text(f, out, j.dump(), tail_to_csv(t));
}

void cmd_bc_table(const Flags& f, std::ostream& out) {
  const std::vector<double> radii = parse_double_list(f.radii);
  const std::vector<double> errs = parse_double_list(f.errors);
  const std::uint64_t seed = seed_of(f);
  const auto samples = sample_torus_haar(f.samples, seed, f.ymax, f.threads);
  const auto rows = borel_cantelli_table(radii, errs, samples, f.threads);
  json j = json::parse(bc_table_to_json(rows));
  j["seed"] = seed;
  j["rng"] = kRngName;
  j["samples"] = f.samples;
  emit_text(f, out, j.dump(), bc_table_to_csv(rows));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Translation surface toolkit", "saddlekit"};
  app.require_subcommand(1);
  Flags f;

  auto surface = [&](CLI::App* c, bool required) {
    auto* o = c->add_option("--surface", f.surface, "surface JSON file")->check(CLI::ExistingFile);
    if (required) o->required();
  };
  auto radius = [&](CLI::App* c, bool required) {
    auto* o = c->add_option("--radius", f.radius, "radius (exact)")->check(kExact);
    if (required) o->required();
  };
  auto budget = [&](CLI::App* c) {
    c->add_option("--budget", f.budget, "max enumeration states (default SADDLEKIT_BUDGET)");
  };
  auto threads = [&](CLI::App* c) {
    c->add_option("--threads", f.threads, "worker threads")->check(CLI::Range(1, 256));
  };
  auto format = [&](CLI::App* c) {
    c->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto fn = [&](CLI::App* c) { c->add_option("--fn", f.fn, "test function JSON or @file"); };
  auto sampling = [&](CLI::App* c, bool ymax) {
    c->add_option("--samples", f.samples, "number of samples");
    c->add_option("--seed", f.seed, "64-bit seed (drawn and echoed if omitted)");
    if (ymax) c->add_option("--ymax", f.ymax, "cusp cut")->check(CLI::Range(2.0, 1e12));
  };

  std::vector<std::pair<CLI::App*, void (*)(const Flags&, std::ostream&)>> commands;
  auto add = [&](const char* name, const char* help, void (*run)(const Flags&, std::ostream&)) {
    CLI::App* c = app.add_subcommand(name, help);
    commands.emplace_back(c, run);
    format(c);
    return c;
  };

  CLI::App* c = add("validate", "check a surface and report its stratum", cmd_validate);
  surface(c, true);
  c = add("count", "count saddle connections up to a radius", cmd_count);
  surface(c, true), radius(c, true), budget(c), threads(c);
  c = add("enumerate", "list saddle connections up to a radius", cmd_enumerate);
  surface(c, true), radius(c, true), budget(c), threads(c);
  c = add("delaunay", "L1 Delaunay triangulation with certificates", cmd_delaunay);
  surface(c, true);
  c = add("chew-check", "Chew paths for every connection up to a radius", cmd_chew_check);
  surface(c, true), radius(c, true), budget(c), threads(c);
  c = add("transform", "Siegel-Veech transform of a test function", cmd_transform);
  surface(c, true), fn(c), radius(c, false), budget(c), threads(c);
  c = add("classify", "case label for the variance argument", cmd_classify);
  surface(c, true), budget(c), threads(c);
  c->add_option("--eps0", f.eps0, "short-curve threshold")->check(kExact)->required();
  c->add_option("--p", f.p, "exponent p (exact)")->check(kExact)->required();
  c = add("torus-exact", "primitive holonomy of g Z^2 and the torus measures", cmd_torus_exact);
  radius(c, true);
  c->add_option("--matrix", f.matrix, "a,b,c,d with det 1")->check(kList);
  c = add("slit-exact", "predicted holonomy of a slit torus", cmd_slit_exact);
  radius(c, true);
  c->add_option("--matrix", f.matrix, "a,b,c,d with det 1")->check(kList);
  c->add_option("--slit", f.slit, "slit holonomy x,y")->check(kList)->required();
  c = add("mc-torus", "Haar Monte Carlo mean of a transform on tori", cmd_mc_torus);
  fn(c), radius(c, false), sampling(c, true), threads(c);
  c = add("mc-stratum", "local Monte Carlo mean of a transform near a surface", cmd_mc_stratum);
  surface(c, true), fn(c), radius(c, false), sampling(c, false), budget(c), threads(c);
  c->add_option("--spread", f.spread, "period noise half-width")->check(CLI::NonNegativeNumber);
  c = add("variance", "L2 norm and variance of torus counts", cmd_variance);
  radius(c, false), sampling(c, true), threads(c);
  c->add_option("--radii", f.radii, "comma-separated radii")->check(kList);
  c = add("tails", "exceedance fractions and tail exponent", cmd_tails);
  surface(c, false), fn(c), radius(c, false), sampling(c, true), budget(c), threads(c);
  c->add_option("--spread", f.spread, "period noise half-width")->check(CLI::NonNegativeNumber);
  c->add_option("--kmax", f.kmax, "thresholds sqrt(k), k <= kmax")->check(CLI::PositiveNumber);
  c = add("bc-table", "Borel-Cantelli table on torus samples", cmd_bc_table);
  sampling(c, true), threads(c);
  c->add_option("--radii", f.radii, "increasing radii")->check(kList)->required();
  c->add_option("--errors", f.errors, "error sizes, same length")->check(kList)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  }

  try {
    for (const auto& [cmd, run_cmd] : commands) {
      if (cmd->parsed()) run_cmd(f, out);
    }
  } catch (const Error& e) {
    err << json{{"error", std::string(error_code_name(e.code()))}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << json{{"error", "INTERNAL"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace saddlekit::cli
