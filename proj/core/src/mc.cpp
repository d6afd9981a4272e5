#include "saddlekit/mc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "saddlekit/error.hpp"

namespace saddlekit {

const char* const kRngName = "mt19937_64/seed_seq(seed,index)";

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kNoiseBits = 24;
constexpr std::size_t kMaxDrawsPerSample = 1000;

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// Uniform on [0, 1) from the top 53 bits; spelled out so the value does not
// depend on the standard library's distribution code.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Runs fn(i) for i < n on `threads` workers; rethrows the failure with the
// smallest index.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads < 1 ? 1 : threads, n));
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::size_t> error_index(workers, n);
  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < n; i += workers) {
      try {
        fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        error_index[w] = i;
        return;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::size_t best = workers;
  for (std::size_t w = 0; w < workers; ++w) {
    if (errors[w] && (best == workers || error_index[w] < error_index[best])) best = w;
  }
  if (best != workers) std::rethrow_exception(errors[best]);
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  if (n == 1) return v[0];
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

const FloatMatrix& float_lattice(const TorusPoint& t, FloatMatrix& scratch) {
  if (const auto* m = std::get_if<FloatMatrix>(&t.g)) return *m;
  scratch = FloatMatrix::from_exact(std::get<ExactMatrix>(t.g));
  return scratch;
}

// Linear map from independent to dependent edge classes.
struct PeriodChart {
  std::vector<int> slot_class;  // triangle * 3 + edge -> class
  std::vector<int> slot_sign;   // edge(slot) = sign * class vector
  std::vector<int> free_classes;
  // dependent class -> (free class, coefficient) with x_dep = sum coeff x_free
  std::vector<std::pair<int, std::vector<std::pair<int, Rational>>>> dependent;
  int classes = 0;
};

PeriodChart period_chart(const TranslationSurface& s) {
  PeriodChart chart;
  const std::size_t slots = 3 * s.triangle_count();
  chart.slot_class.assign(slots, -1);
  chart.slot_sign.assign(slots, 1);
  for (int t = 0; t < static_cast<int>(s.triangle_count()); ++t) {
    for (int i = 0; i < 3; ++i) {
      const std::size_t k = static_cast<std::size_t>(3 * t + i);
      if (chart.slot_class[k] >= 0) continue;
      const EdgeSlot p = s.partner({t, i});
      const std::size_t pk = static_cast<std::size_t>(3 * p.triangle + p.edge);
      chart.slot_class[k] = chart.classes;
      chart.slot_class[pk] = chart.classes;
      chart.slot_sign[pk] = -1;
      ++chart.classes;
    }
  }
  // Row-reduce the closing relations, one per triangle.
  const int cols = chart.classes;
  std::vector<std::vector<Rational>> rows;
  for (int t = 0; t < static_cast<int>(s.triangle_count()); ++t) {
    std::vector<Rational> row(static_cast<std::size_t>(cols), Rational(0));
    for (int i = 0; i < 3; ++i) {
      const std::size_t k = static_cast<std::size_t>(3 * t + i);
      row[static_cast<std::size_t>(chart.slot_class[k])] += chart.slot_sign[k];
    }
    rows.push_back(std::move(row));
  }
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (int c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && sgn(rows[piv][static_cast<std::size_t>(c)]) == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const Rational lead = rows[r][static_cast<std::size_t>(c)];
    for (auto& x : rows[r]) x /= lead;
    for (std::size_t o = 0; o < rows.size(); ++o) {
      if (o == r || sgn(rows[o][static_cast<std::size_t>(c)]) == 0) continue;
      const Rational f = rows[o][static_cast<std::size_t>(c)];
      for (std::size_t j = 0; j < static_cast<std::size_t>(cols); ++j) rows[o][j] -= f * rows[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
  for (int c = 0; c < cols; ++c) {
    if (!is_pivot[static_cast<std::size_t>(c)]) chart.free_classes.push_back(c);
  }
  for (std::size_t k = 0; k < pivot_col.size(); ++k) {
    std::vector<std::pair<int, Rational>> terms;
    for (int f : chart.free_classes) {
      const Rational& a = rows[k][static_cast<std::size_t>(f)];
      if (sgn(a) != 0) terms.emplace_back(f, -a);
    }
    chart.dependent.emplace_back(pivot_col[k], std::move(terms));
  }
  return chart;
}

TranslationSurface perturb(const TranslationSurface& base, const PeriodChart& chart,
                           const std::vector<ExactVector>& delta) {
  std::vector<Triangle> tris = base.triangles();
  for (std::size_t t = 0; t < tris.size(); ++t) {
    for (std::size_t i = 0; i < 3; ++i) {
      const std::size_t k = 3 * t + i;
      const ExactVector& d = delta[static_cast<std::size_t>(chart.slot_class[k])];
      tris[t].edges[i] += Rational(chart.slot_sign[k]) * d;
    }
  }
  return TranslationSurface(std::move(tris), base.gluing());
}

}  // namespace

SampleReport summarize(const std::vector<double>& values) {
  SampleReport r;
  r.n_samples = values.size();
  if (values.empty()) return r;
  std::vector<double> sq(values.size());
  std::transform(values.begin(), values.end(), sq.begin(), [](double v) { return v * v; });
  const double n = static_cast<double>(values.size());
  r.mean = pairwise_sum(values.data(), values.size()) / n;
  r.second_moment = pairwise_sum(sq.data(), sq.size()) / n;
  r.variance = r.second_moment - r.mean * r.mean;
  r.ci_radius = 1.96 * std::sqrt(std::max(0.0, r.variance) / n);
  r.corrected_mean = r.mean;
  r.corrected_second_moment = r.second_moment;
  return r;
}

std::string report_to_json(const SampleReport& r) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  return nlohmann::json{{"n_samples", r.n_samples}, {"mean", r.mean},
                        {"second_moment", r.second_moment}, {"variance", r.variance},
                        {"ci_radius", r.ci_radius}, {"ambiguous", r.ambiguous},
                        {"truncated_mass", r.truncated_mass}, {"corrected_mean", r.corrected_mean},
                        {"corrected_second_moment", r.corrected_second_moment},
                        {"seed", r.seed}, {"rng", r.rng}, {"parameters", params}}
      .dump();
}

std::string report_to_csv(const SampleReport& r) {
  std::ostringstream os;
  os << "n_samples,mean,second_moment,variance,ci_radius,ambiguous,truncated_mass,"
        "corrected_mean,corrected_second_moment,seed,rng\n";
  os << r.n_samples << ',' << fmt(r.mean) << ',' << fmt(r.second_moment) << ','
     << fmt(r.variance) << ',' << fmt(r.ci_radius) << ',' << r.ambiguous << ','
     << fmt(r.truncated_mass) << ',' << fmt(r.corrected_mean) << ','
     << fmt(r.corrected_second_moment) << ',' << r.seed << ',' << r.rng << '\n';
  return os.str();
}

double haar_truncated_mass(double y_max) { return 3.0 / (kPi * y_max); }

std::vector<TorusPoint> sample_torus_haar(std::size_t n, std::uint64_t seed, double y_max,
                                          int threads) {
  if (!(y_max >= 2.0) || !std::isfinite(y_max)) {
    throw Error(ErrorCode::kInvalidArgument, "y_max must be at least 2");
  }
  std::vector<TorusPoint> out(n);
  const double y_min = std::sqrt(3.0) / 2.0;
  parallel_for(n, threads, [&](std::size_t i) {
    std::mt19937_64 rng = stream(seed, i);
    double x = 0.0, y = 0.0;
    do {
      x = unit(rng) - 0.5;
      // inverse CDF of dy / y^2 on [y_min, y_max]
      y = 1.0 / (1.0 / y_min - unit(rng) * (1.0 / y_min - 1.0 / y_max));
    } while (x * x + y * y < 1.0);
    const double theta = 2.0 * kPi * unit(rng);
    const double s = std::sqrt(y);
    const FloatMatrix basis(1.0 / s, x / s, 0.0, s);
    out[i] = TorusPoint{FloatMatrix::rotation(theta) * basis};
  });
  return out;
}

std::vector<StratumSample> sample_stratum_local(const TranslationSurface& base, double spread,
                                                std::size_t n, std::uint64_t seed, int threads) {
  validate(base);
  if (!(spread >= 0.0) || !std::isfinite(spread)) {
    throw Error(ErrorCode::kInvalidArgument, "spread must be a nonnegative number");
  }
  const PeriodChart chart = period_chart(base);
  std::vector<StratumSample> out(n);
  std::vector<std::size_t> draws(n, 0);
  parallel_for(n, threads, [&](std::size_t i) {
    std::mt19937_64 rng = stream(seed, i);
    std::vector<ExactVector> delta(static_cast<std::size_t>(chart.classes));
    for (std::size_t d = 1; d <= kMaxDrawsPerSample; ++d) {
      draws[i] = d;
      for (int c : chart.free_classes) {
        const double ux = spread * (2.0 * unit(rng) - 1.0);
        const double uy = spread * (2.0 * unit(rng) - 1.0);
        delta[static_cast<std::size_t>(c)] = {dyadic_round(ux, kNoiseBits), dyadic_round(uy, kNoiseBits)};
      }
      for (const auto& [dep, terms] : chart.dependent) {
        ExactVector v(0, 0);
        for (const auto& [f, a] : terms) v += a * delta[static_cast<std::size_t>(f)];
        delta[static_cast<std::size_t>(dep)] = v;
      }
      TranslationSurface s = perturb(base, chart, delta);
      const bool ok = std::all_of(s.triangles().begin(), s.triangles().end(),
                                  [](const Triangle& t) { return sgn(t.doubled_area()) > 0; });
      if (!ok) continue;
      Rational a = area(s);
      out[i] = StratumSample{std::move(s), std::move(a)};
      return;
    }
    throw Error(ErrorCode::kAcceptanceRate, "sample " + std::to_string(i) + " was never accepted");
  });
  std::size_t total = 0;
  for (std::size_t d : draws) total += d;
  if (n > 0 && static_cast<double>(n) < 0.1 * static_cast<double>(total)) {
    throw Error(ErrorCode::kAcceptanceRate,
                "acceptance rate " + fmt(static_cast<double>(n) / static_cast<double>(total)) +
                    " is below 0.1");
  }
  return out;
}

namespace {

double lattice_value(const FloatMatrix& g, const TestFunction& f, double reach, std::size_t& amb) {
  if (const auto* disc = std::get_if<DiscIndicator>(&f)) {
    return static_cast<double>(torus_count(g, to_double(disc->r)));
  }
  std::size_t in = 0;
  for (const FloatVector& v : torus_holonomy(g, reach)) {
    const Membership m = member(f, v.x, v.y, 1e-9);
    if (m == Membership::kIn) ++in;
    if (m == Membership::kAmbiguous) ++amb;
  }
  return static_cast<double>(in);
}

void check_planar(const TestFunction& f) {
  check_test_function(f);
  if (std::holds_alternative<ProductPair>(f)) {
    throw Error(ErrorCode::kInvalidArgument, "torus sampling takes planar test functions");
  }
}

double reach_of(const TestFunction& f) { return support_radius(f) * (1.0 + 1e-9) + 1e-9; }

}  // namespace

std::vector<double> torus_values(const std::vector<TorusPoint>& samples, const TestFunction& f,
                                 int threads, std::size_t* ambiguous) {
  check_planar(f);
  for (const TorusPoint& t : samples) check_torus_point(t);
  std::vector<double> out(samples.size(), 0.0);
  std::vector<std::size_t> amb(samples.size(), 0);
  const double reach = reach_of(f);
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    FloatMatrix scratch;
    out[i] = lattice_value(float_lattice(samples[i], scratch), f, reach, amb[i]);
  });
  if (ambiguous) {
    for (std::size_t a : amb) *ambiguous += a;
  }
  return out;
}

CuspMoments haar_cusp_moments(const TestFunction& f, double y_max, int grid) {
  check_planar(f);
  if (!(y_max >= 2.0) || !std::isfinite(y_max)) {
    throw Error(ErrorCode::kInvalidArgument, "y_max must be at least 2");
  }
  const bool radial = std::holds_alternative<DiscIndicator>(f) || std::holds_alternative<AnnulusIndicator>(f);
  const int G = grid > 0 ? grid : (radial ? 400 : 32);
  const int turns = radial ? 1 : G;
  const double reach = reach_of(f);
  std::vector<double> sum(static_cast<std::size_t>(G), 0.0), sum_sq(static_cast<std::size_t>(G), 0.0);
  std::size_t amb = 0;
  for (int i = 0; i < G; ++i) {
    const double y = y_max / ((i + 0.5) / G);
    const double sy = std::sqrt(y);
    for (int j = 0; j < G; ++j) {
      const double x = -0.5 + (j + 0.5) / G;
      const FloatMatrix basis(1.0 / sy, x / sy, 0.0, sy);
      for (int k = 0; k < turns; ++k) {
        const FloatMatrix g = radial ? basis : FloatMatrix::rotation(2.0 * kPi * (k + 0.5) / turns) * basis;
        const double v = lattice_value(g, f, reach, amb);
        sum[static_cast<std::size_t>(i)] += v;
        sum_sq[static_cast<std::size_t>(i)] += v * v;
      }
    }
  }
  const double cells = static_cast<double>(G) * G * turns;
  CuspMoments m;
  m.truncated_mass = haar_truncated_mass(y_max);
  m.mean = pairwise_sum(sum.data(), sum.size()) / cells;
  m.second_moment = pairwise_sum(sum_sq.data(), sum_sq.size()) / cells;
  return m;
}

void apply_cusp_correction(SampleReport& r, const TestFunction& f, double y_max) {
  const CuspMoments c = haar_cusp_moments(f, y_max);
  const double m = c.truncated_mass;
  r.truncated_mass = m;
  r.corrected_mean = (1.0 - m) * r.mean + m * c.mean;
  r.corrected_second_moment = (1.0 - m) * r.second_moment + m * c.second_moment;
  r.parameters["ymax"] = fmt(y_max);
}

std::vector<double> stratum_values(const std::vector<StratumSample>& samples, const TestFunction& f,
                                   const EnumerateOptions& options, int threads,
                                   std::size_t* ambiguous) {
  std::vector<double> out(samples.size(), 0.0);
  std::vector<std::size_t> amb(samples.size(), 0);
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    try {
      const SvValue v = transform_normalized(samples[i].surface, f, samples[i].area, options);
      out[i] = v.value;
      amb[i] = v.ambiguous;
    } catch (const Error& e) {
      throw Error(e.code(), "sample " + std::to_string(i) + ": " + e.what());
    }
  });
  if (ambiguous) {
    for (std::size_t a : amb) *ambiguous += a;
  }
  return out;
}

std::vector<double> torus_counts(const std::vector<TorusPoint>& samples, double R, int threads) {
  std::vector<double> out(samples.size(), 0.0);
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    FloatMatrix scratch;
    out[i] = static_cast<double>(torus_count(float_lattice(samples[i], scratch), R));
  });
  return out;
}

SampleReport estimate_mean_transform(const std::vector<TorusPoint>& samples, const TestFunction& f,
                                     int threads) {
  std::size_t amb = 0;
  SampleReport r = summarize(torus_values(samples, f, threads, &amb));
  r.ambiguous = amb;
  r.parameters["fn"] = test_function_to_json(f);
  return r;
}

SampleReport estimate_mean_transform(const std::vector<StratumSample>& samples,
                                     const TestFunction& f, const EnumerateOptions& options,
                                     int threads) {
  std::size_t amb = 0;
  SampleReport r = summarize(stratum_values(samples, f, options, threads, &amb));
  r.ambiguous = amb;
  r.parameters["fn"] = test_function_to_json(f);
  return r;
}

L2Estimate estimate_L2_and_variance(const std::vector<double>& counts, double R, double c) {
  L2Estimate e;
  e.R = R;
  e.c = c;
  e.report = summarize(counts);
  e.L_hat = e.report.second_moment;
  const double main = c * kPi * R * R;
  e.V_hat = e.L_hat - main * main;
  e.report.parameters["radius"] = fmt(R);
  return e;
}

L2Estimate estimate_L2_and_variance(const std::vector<TorusPoint>& samples, double R, int threads) {
  return estimate_L2_and_variance(torus_counts(samples, R, threads), R, siegel_constant_torus());
}

TailHistogram tail_histogram(const std::vector<double>& values, int K) {
  if (K < 1) throw Error(ErrorCode::kInvalidArgument, "K must be positive");
  TailHistogram h;
  const double n = static_cast<double>(values.size());
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> xs, ys;
  for (int k = 1; k <= K; ++k) {
    const double t = std::sqrt(static_cast<double>(k));
    const auto above = static_cast<double>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t));
    const double frac = values.empty() ? 0.0 : above / n;
    h.thresholds.push_back(t);
    h.exceedance.push_back(frac);
    if (frac > 0.0 && frac < 1.0) {
      xs.push_back(std::log(t));
      ys.push_back(std::log(frac));
    }
  }
  h.fit_points = xs.size();
  if (xs.size() < 2) {
    h.degenerate = true;
    return h;
  }
  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  h.q_hat = -slope;
  if (xs.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - (my + slope * (xs[i] - mx));
      rss += r * r;
    }
    h.fit_error = std::sqrt(rss / (m - 2.0) / sxx);
  }
  return h;
}

std::vector<BorelCantelliRow> borel_cantelli_table(const std::vector<double>& radii,
                                                   const std::vector<double>& errors,
                                                   const std::vector<TorusPoint>& samples,
                                                   int threads) {
  if (radii.size() != errors.size()) {
    throw Error(ErrorCode::kInvalidArgument, "radii and errors differ in length");
  }
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(errors[k] > 0.0)) throw Error(ErrorCode::kInvalidArgument, "errors must be positive");
    if (!(radii[k] > 0.0) || (k > 0 && !(radii[k] > radii[k - 1]))) {
      throw Error(ErrorCode::kInvalidArgument, "radii must be positive and increasing");
    }
  }
  const double c = siegel_constant_torus();
  const double n = static_cast<double>(samples.size());
  std::vector<BorelCantelliRow> rows;
  double partial = 0.0;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    BorelCantelliRow row;
    row.R = radii[k];
    row.e = errors[k];
    const std::vector<double> counts = torus_counts(samples, row.R, threads);
    const L2Estimate est = estimate_L2_and_variance(counts, row.R, c);
    const double main = c * kPi * row.R * row.R;
    std::vector<double> dev(counts.size());
    std::size_t over = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const double d = counts[i] - main;
      dev[i] = d * d;
      if (std::abs(d) > row.e) ++over;
    }
    const double e2 = row.e * row.e;
    row.V_hat = est.V_hat;
    row.ratio = row.V_hat / e2;
    partial += row.ratio;
    row.partial_sum = partial;
    if (n > 0) {
      row.exceedance = static_cast<double>(over) / n;
      row.chebyshev = pairwise_sum(dev.data(), dev.size()) / n / e2;
      row.binomial_ci = std::sqrt(row.exceedance * (1.0 - row.exceedance) / n) + 1.0 / n;
    }
    row.consistent = row.exceedance <= row.chebyshev + 3.0 * row.binomial_ci;
    rows.push_back(row);
  }
  return rows;
}

std::string tail_to_json(const TailHistogram& t) {
  return nlohmann::json{{"thresholds", t.thresholds}, {"exceedance", t.exceedance},
                        {"q_hat", t.q_hat},           {"fit_error", t.fit_error},
                        {"fit_points", t.fit_points}, {"degenerate", t.degenerate}}
      .dump();
}

std::string tail_to_csv(const TailHistogram& t) {
  std::ostringstream os;
  os << "k,threshold,exceedance\n";
  for (std::size_t k = 0; k < t.thresholds.size(); ++k) {
    os << k + 1 << ',' << fmt(t.thresholds[k]) << ',' << fmt(t.exceedance[k]) << '\n';
  }
  return os.str();
}

std::string bc_table_to_json(const std::vector<BorelCantelliRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"R", r.R}, {"e", r.e}, {"V_hat", r.V_hat}, {"ratio", r.ratio},
                   {"partial_sum", r.partial_sum}, {"exceedance", r.exceedance},
                   {"chebyshev", r.chebyshev}, {"binomial_ci", r.binomial_ci},
                   {"consistent", r.consistent}});
  }
  return nlohmann::json{{"rows", out}}.dump();
}

std::string bc_table_to_csv(const std::vector<BorelCantelliRow>& rows) {
  std::ostringstream os;
  os << "R,e,V_hat,ratio,partial_sum,exceedance,chebyshev,binomial_ci,consistent\n";
  for (const auto& r : rows) {
    os << fmt(r.R) << ',' << fmt(r.e) << ',' << fmt(r.V_hat) << ',' << fmt(r.ratio) << ','
       << fmt(r.partial_sum) << ',' << fmt(r.exceedance) << ',' << fmt(r.chebyshev) << ','
       << fmt(r.binomial_ci) << ',' << (r.consistent ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace saddlekit
