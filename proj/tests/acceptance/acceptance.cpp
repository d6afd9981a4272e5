// Acceptance suite: one PASS/FAIL line per criterion. `--only k` runs a
// single criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "corpus.hpp"
#include "saddlekit/chew.hpp"
#include "saddlekit/delaunay.hpp"
#include "saddlekit/error.hpp"
#include "saddlekit/geodesic.hpp"
#include "saddlekit/mc.hpp"
#include "saddlekit/oracle.hpp"
#include "saddlekit/sv.hpp"

using namespace saddlekit;
using saddlekit::testing::sorted;

namespace {

constexpr double kPi = std::numbers::pi;
const double kC = 6.0 / (kPi * kPi);

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome torus_oracle() {
  const auto t0 = Clock::now();
  const auto torus = square_torus();
  for (long R : {1, 2, 3, 5, 10}) {
    std::vector<ExactVector> want;
    for (const auto& p : primitive_points_in_disc(R)) want.push_back({p.x, p.y});
    if (sorted(enumerate(torus, R).distinct_holonomies()) != sorted(want)) {
      return {false, fmt("set mismatch at R=%ld", R)};
    }
  }
  const double dt = seconds_since(t0);
  return {dt < 10.0, fmt("sets equal for R in {1,2,3,5,10}, %.2fs", dt)};
}

Outcome siegel_mean() {
  const auto t0 = Clock::now();
  const double R = 20, y_max = 50;
  const TestFunction f = DiscIndicator{20};
  const auto samples = sample_torus_haar(10000, 20240601, y_max, 1);
  SampleReport r = estimate_mean_transform(samples, f, 1);
  apply_cusp_correction(r, f, y_max);
  const double scale = kPi * R * R;
  const double mean = r.corrected_mean / scale, ci = r.ci_radius / scale;
  const double dt = seconds_since(t0);
  const bool ok = std::abs(mean - kC) <= 3 * ci && dt < 300.0;
  return {ok, fmt("N/(pi R^2) = %.5f (raw %.5f), ci %.5f, target %.5f, %.1fs", mean,
                  r.mean / scale, ci, kC, dt)};
}

Outcome l2_trend() {
  const double y_max = 50;
  const auto samples = sample_torus_haar(10000, 777, y_max, 1);
  std::vector<double> dev;
  double ratio20 = 0.0;
  std::string detail;
  for (double R : {5.0, 10.0, 20.0}) {
    const L2Estimate e = estimate_L2_and_variance(samples, R);
    const CuspMoments cusp = haar_cusp_moments(DiscIndicator{from_double(R)}, y_max);
    const double L = (1.0 - cusp.truncated_mass) * e.L_hat + cusp.truncated_mass * cusp.second_moment;
    const double main = kC * kPi * R * R;
    dev.push_back(std::abs(std::sqrt(L) - main) / (R * R));
    ratio20 = std::sqrt(L) / (kPi * R * R);
    detail += fmt("R=%g: sqrtL/(piR^2)=%.4f dev/R^2=%.4f; ", R, ratio20, dev.back());
  }
  const bool within = std::abs(ratio20 - kC) <= 0.05 * kC;
  const bool monotone = dev[1] <= dev[0] && dev[2] <= dev[1];
  return {within && monotone, detail};
}

Outcome chew_bound() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(4);
  std::size_t paths = 0, violations = 0;
  double worst = 0.0;
  for (int set = 0; set < 500; ++set) {
    const std::size_t n = 2 + static_cast<std::size_t>(set) % 49;
    const auto pts = saddlekit::testing::random_points(rng, n, 1000, 97);
    const PlanarDelaunay pd = planar_delaunay(pts);
    for (int a = 0; a < static_cast<int>(n); ++a) {
      for (int b = a + 1; b < static_cast<int>(n); ++b) {
        const ChewPath p = planar_chew(pd, a, b);
        ++paths;
        worst = std::max(worst, p.ratio_upper_bound);
        if (!within_sqrt10(p)) ++violations;
      }
    }
  }
  const double dt = seconds_since(t0);
  return {violations == 0 && dt < 120.0,
          fmt("%zu paths, %zu violations, worst ratio <= %.4f, %.1fs", paths, violations, worst, dt)};
}

Outcome shortest_is_delaunay() {
  const auto corpus = saddlekit::testing::random_corpus(100, 55);
  std::size_t hits = 0;
  for (const auto& [name, s] : corpus) {
    const ExactVector v = shortest(s).holonomy;
    const auto t = delaunay_l1(s);
    bool found = false;
    for (const auto& tri : t.surface.triangles()) {
      for (const auto& e : tri.edges) found = found || e == v || e == -v;
    }
    if (found) ++hits;
  }
  return {hits == corpus.size(), fmt("%zu/%zu", hits, corpus.size())};
}

Outcome pair_identity() {
  auto corpus = saddlekit::testing::fixed_corpus();
  for (auto& n : saddlekit::testing::random_corpus(100, 321)) corpus.push_back(n);
  const std::vector<TestFunction> fs = {DiscIndicator{ratio(3, 2)}, AnnulusIndicator{1, 2},
                                        DiscIndicator{ratio(5, 2)}};
  std::size_t cases = 0, bad = 0;
  for (const auto& [name, s] : corpus) {
    for (const auto& f : fs) {
      const double one = transform(s, f).value;
      if (pair_transform(s, f, f).value != one * one) ++bad;
      ++cases;
    }
  }
  return {bad == 0 && cases >= 200, fmt("%zu cases, %zu mismatches", cases, bad)};
}

Outcome sector_sandwich_chain() {
  // The triangle averages are closed-form in |v| and the count compares
  // squared norms exactly, so no evaluation is ambiguous.
  const auto s = square_torus();
  std::string detail;
  bool ok = true;
  for (double R : {5.0, 10.0}) {
    for (double theta : {kPi / 16, kPi / 32}) {
      try {
        const auto w = sector_sandwich(s, R, theta);
        const bool ordered = w.lower <= w.scaled + w.margin && w.scaled <= w.upper + w.margin;
        ok = ok && ordered;
        detail += fmt("R=%g th=pi/%g: %.4f <= %.4f <= %.4f; ", R, kPi / theta, w.lower, w.scaled,
                      w.upper);
      } catch (const Error& e) {
        ok = false;
        detail += fmt("R=%g th=pi/%g: %s; ", R, kPi / theta, e.what());
      }
    }
  }
  return {ok, detail + "ambiguous evaluations 0"};
}

Outcome nu_spectrum() {
  const auto spec = determinant_spectrum(30);
  const double f1 = static_cast<double>(spec.at(1));
  const double r2 = spec.at(2) / f1, r3 = spec.at(3) / f1;
  const bool phi_ok = std::abs(r2 - 1.0) <= 0.1 && std::abs(r3 / 2.0 - 1.0) <= 0.1;
  const bool phi_over_n = std::abs(r2 / 0.5 - 1.0) <= 0.1 && std::abs(r3 / (2.0 / 3.0) - 1.0) <= 0.1;
  const std::size_t collinear = collinear_non_antipodal_pairs(30);
  return {phi_ok && collinear == 0,
          fmt("ratios %.4f and %.4f against phi(n) targets 1 and 2; against phi(n)/n targets "
              "0.5 and 0.667 they %s; collinear exceptions %zu",
              r2, r3, phi_over_n ? "agree within 10%" : "disagree", collinear)};
}

Outcome tail_consistency() {
  const auto t0 = Clock::now();
  const auto samples = sample_stratum_local(octagon_surface(), 0.3, 10000, 99, 1);
  const auto values = stratum_values(samples, DiscIndicator{ratio(1, 2)});
  const TailHistogram t = tail_histogram(values, 64);
  bool monotone = true;
  for (std::size_t k = 1; k < t.exceedance.size(); ++k) {
    monotone = monotone && t.exceedance[k] <= t.exceedance[k - 1];
  }
  const bool ok = monotone && !t.degenerate && t.q_hat >= 2.0 - t.fit_error;
  return {ok, fmt("q_hat %.3f, fit error %.3f, %zu fit points, monotone %s, %.1fs", t.q_hat,
                  t.fit_error, t.fit_points, monotone ? "yes" : "no", seconds_since(t0))};
}

Outcome borel_cantelli() {
  const auto samples = sample_torus_haar(10000, 31337, 50, 1);
  std::vector<double> radii, errors;
  for (int k = 1; k <= 5; ++k) {
    radii.push_back(std::ldexp(1.0, k));
    errors.push_back(std::pow(radii.back(), 1.9));
  }
  const auto rows = borel_cantelli_table(radii, errors, samples);
  std::size_t violations = 0;
  std::string detail;
  for (const auto& r : rows) {
    if (!r.consistent) ++violations;
    detail += fmt("R=%g exc=%.4f cheb=%.4f; ", r.R, r.exceedance, r.chebyshev);
  }
  return {violations == 0, fmt("%zu violations; ", violations) + detail};
}

Outcome determinism() {
  const std::string octagon = std::string(SADDLEKIT_TEST_DATA) + "/octagon.json";
  const std::vector<std::vector<std::string>> commands = {
      {"mc-torus", "--radius", "10", "--samples", "3000", "--seed", "5", "--ymax", "50"},
      {"mc-torus", "--fn", R"({"variant":"sector","r":"8","center":0.3,"half_angle":"pi/8"})",
       "--samples", "2000", "--seed", "6", "--format", "csv"},
      {"mc-stratum", "--surface", octagon, "--radius", "1/2", "--spread", "0.05", "--samples",
       "200", "--seed", "7"},
      {"variance", "--radii", "5,10", "--samples", "2000", "--seed", "8"},
      {"tails", "--surface", octagon, "--radius", "1/2", "--spread", "0.3", "--samples", "300",
       "--kmax", "64", "--seed", "9"},
      {"tails", "--radius", "5", "--samples", "2000", "--seed", "10", "--format", "csv"},
      {"bc-table", "--radii", "2,4,8", "--errors", "3.7,13.9,52", "--samples", "2000", "--seed",
       "11"},
  };
  std::size_t same = 0;
  std::string detail;
  for (const auto& cmd : commands) {
    std::string outputs[2];
    int codes[2];
    const char* threads[2] = {"1", "4"};
    for (int k = 0; k < 2; ++k) {
      std::vector<std::string> args = {"saddlekit"};
      args.insert(args.end(), cmd.begin(), cmd.end());
      args.insert(args.end(), {"--threads", threads[k]});
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream out, err;
      codes[k] = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
      outputs[k] = out.str();
    }
    if (codes[0] == 0 && codes[1] == 0 && !outputs[0].empty() && outputs[0] == outputs[1]) {
      ++same;
    } else {
      detail += " differs: " + cmd[0];
    }
  }
  return {same == commands.size(),
          fmt("%zu/%zu commands byte-identical across 1 and 4 threads", same, commands.size()) +
              detail};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  const std::vector<std::function<Outcome()>> criteria = {
      torus_oracle,        siegel_mean,           l2_trend,    chew_bound,
      shortest_is_delaunay, pair_identity,        sector_sandwich_chain,
      nu_spectrum,         tail_consistency,      borel_cantelli, determinism,
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (only != 0 && only != id) continue;
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %d: %s (%s)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
