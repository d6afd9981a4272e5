#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "saddlekit/oracle.hpp"
#include "saddlekit/sv.hpp"

namespace saddlekit {

/// Name of the generator behind every stochastic routine. Sample i draws
/// from its own stream, so results do not depend on the thread count.
extern const char* const kRngName;

struct SampleReport {
  std::size_t n_samples = 0;
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;   // second_moment - mean^2
  double ci_radius = 0.0;  // 1.96 sqrt(variance / n)
  std::size_t ambiguous = 0;
  // Torus runs: share of Haar mass above the y_max cut and the moments with
  // the cusp's contribution added back; equal to mean / second_moment
  // otherwise.
  double truncated_mass = 0.0;
  double corrected_mean = 0.0;
  double corrected_second_moment = 0.0;
  std::uint64_t seed = 0;
  std::string rng = kRngName;
  std::map<std::string, std::string> parameters;
};

/// Mean and second moment by a fixed-tree pairwise sum of the values in
/// order.
SampleReport summarize(const std::vector<double>& values);

std::string report_to_json(const SampleReport& r);
std::string report_to_csv(const SampleReport& r);

// ---------------------------------------------------------------------------
// Samplers

/// Haar-random unit-covolume lattices: z = x + iy uniform for dx dy / y^2 on
/// the modular fundamental domain cut at y <= y_max, times a uniform rotation.
/// Requires y_max >= 2.
std::vector<TorusPoint> sample_torus_haar(std::size_t n, std::uint64_t seed, double y_max,
                                          int threads = 1);

/// Share of the fundamental domain's hyperbolic area above y_max: 3 / (pi y_max).
double haar_truncated_mass(double y_max);

struct CuspMoments {
  double truncated_mass = 0.0;
  double mean = 0.0;           // of f-hat over the cut-off cusp
  double second_moment = 0.0;
};

/// Deterministic midpoint quadrature of f-hat over y > y_max in the
/// coordinates s = y_max / y (uniform on (0, 1]) and x, plus the rotation
/// unless f is radial. grid = 0 picks 400 (radial) or 32 points per axis.
CuspMoments haar_cusp_moments(const TestFunction& f, double y_max, int grid = 0);

/// Fills truncated_mass and the corrected moments of a torus report.
void apply_cusp_correction(SampleReport& r, const TestFunction& f, double y_max);

/// A surface together with its area; the sampled point is surface / sqrt(area).
struct StratumSample {
  TranslationSurface surface;
  Rational area;
};

/// Local period-coordinate box around base: the independent edge vectors of
/// the triangulation move by uniform noise in [-spread, spread]^2 (dyadic,
/// 2^-24 grid), the others follow, and surfaces with a nonpositive triangle
/// are redrawn. Throws kAcceptanceRate when fewer than 10% of draws survive.
std::vector<StratumSample> sample_stratum_local(const TranslationSurface& base, double spread,
                                                std::size_t n, std::uint64_t seed, int threads = 1);

// ---------------------------------------------------------------------------
// Per-sample values

/// f-hat on each lattice (float membership with margin 1e-9; disc indicators
/// count exactly in double precision). Ambiguous vectors are not counted and
/// are added to *ambiguous when given.
std::vector<double> torus_values(const std::vector<TorusPoint>& samples, const TestFunction& f,
                                 int threads = 1, std::size_t* ambiguous = nullptr);

/// f-hat at the unit-area rescaling of each sample. Enumeration errors are
/// rethrown with the sample index in the message.
std::vector<double> stratum_values(const std::vector<StratumSample>& samples, const TestFunction& f,
                                   const EnumerateOptions& options = {}, int threads = 1,
                                   std::size_t* ambiguous = nullptr);

/// N(g, R) for each lattice.
std::vector<double> torus_counts(const std::vector<TorusPoint>& samples, double R, int threads = 1);

// ---------------------------------------------------------------------------
// Estimators

SampleReport estimate_mean_transform(const std::vector<TorusPoint>& samples, const TestFunction& f,
                                     int threads = 1);
SampleReport estimate_mean_transform(const std::vector<StratumSample>& samples,
                                     const TestFunction& f, const EnumerateOptions& options = {},
                                     int threads = 1);

struct L2Estimate {
  double R = 0.0;
  double L_hat = 0.0;  // sample second moment of N(., R)
  double V_hat = 0.0;  // L_hat - (c pi R^2)^2
  double c = 0.0;
  SampleReport report;
};

/// From precomputed counts N(., R).
L2Estimate estimate_L2_and_variance(const std::vector<double>& counts, double R, double c);
/// Torus samples with c = 6 / pi^2.
L2Estimate estimate_L2_and_variance(const std::vector<TorusPoint>& samples, double R,
                                    int threads = 1);

struct TailHistogram {
  std::vector<double> thresholds;  // sqrt(k), k = 1..K
  std::vector<double> exceedance;  // fraction of values > sqrt(k)
  double q_hat = 0.0;              // minus the slope of log exceedance vs log sqrt(k)
  double fit_error = 0.0;          // standard error of the slope
  std::size_t fit_points = 0;
  bool degenerate = false;         // fewer than two points with 0 < fraction < 1
};

TailHistogram tail_histogram(const std::vector<double>& values, int K);

struct BorelCantelliRow {
  double R = 0.0;
  double e = 0.0;
  double V_hat = 0.0;
  double ratio = 0.0;        // V_hat / e^2
  double partial_sum = 0.0;  // running sum of ratio
  double exceedance = 0.0;   // fraction with |N - c pi R^2| > e
  double chebyshev = 0.0;    // mean (N - c pi R^2)^2 / e^2
  double binomial_ci = 0.0;  // sqrt(p (1 - p) / n) + 1 / n
  bool consistent = true;    // exceedance <= chebyshev + 3 binomial_ci
};

/// Torus samples, c = 6 / pi^2. Requires increasing radii and positive
/// errors of the same length.
std::vector<BorelCantelliRow> borel_cantelli_table(const std::vector<double>& radii,
                                                   const std::vector<double>& errors,
                                                   const std::vector<TorusPoint>& samples,
                                                   int threads = 1);

std::string tail_to_json(const TailHistogram& t);
std::string tail_to_csv(const TailHistogram& t);
std::string bc_table_to_json(const std::vector<BorelCantelliRow>& rows);
std::string bc_table_to_csv(const std::vector<BorelCantelliRow>& rows);

}  // namespace saddlekit
