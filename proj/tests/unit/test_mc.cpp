#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "saddlekit/error.hpp"
#include "saddlekit/mc.hpp"

using namespace saddlekit;

namespace {

constexpr double kPi = std::numbers::pi;
const double kC = 6.0 / (kPi * kPi);

SampleReport torus_report(const TestFunction& f, std::size_t n, std::uint64_t seed, double y_max,
                          int threads = 1) {
  const auto samples = sample_torus_haar(n, seed, y_max, threads);
  SampleReport r = estimate_mean_transform(samples, f, threads);
  apply_cusp_correction(r, f, y_max);
  return r;
}

}  // namespace

TEST(Summarize, EmptyAndSmall) {
  const auto e = summarize({});
  EXPECT_EQ(e.n_samples, 0u);
  EXPECT_EQ(e.mean, 0.0);
  const auto r = summarize({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(r.mean, 2.5);
  EXPECT_DOUBLE_EQ(r.second_moment, 7.5);
  EXPECT_DOUBLE_EQ(r.variance, 1.25);
}

TEST(TorusSampler, UnimodularAndDeterministic) {
  const auto a = sample_torus_haar(200, 42, 50, 1);
  const auto b = sample_torus_haar(200, 42, 50, 3);
  ASSERT_EQ(a.size(), 200u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& ga = std::get<FloatMatrix>(a[i].g);
    const auto& gb = std::get<FloatMatrix>(b[i].g);
    EXPECT_NEAR(ga.det(), 1.0, 1e-12);
    EXPECT_EQ(ga.a(), gb.a());
    EXPECT_EQ(ga.d(), gb.d());
  }
  EXPECT_TRUE(sample_torus_haar(0, 1, 50).empty());
  EXPECT_THROW(sample_torus_haar(10, 1, 1.5), Error);
}

TEST(TorusMean, ReportsIdenticalAcrossThreads) {
  const TestFunction f = DiscIndicator{10};
  const auto r1 = torus_report(f, 500, 9, 50, 1);
  const auto r4 = torus_report(f, 500, 9, 50, 4);
  EXPECT_EQ(report_to_json(r1), report_to_json(r4));
  EXPECT_EQ(report_to_csv(r1), report_to_csv(r4));
}

TEST(TorusMean, DiscGroundTruth) {
  // E f-hat = (1 / zeta(2)) * area of the support.
  for (double R : {5.0, 10.0, 20.0}) {
    const auto r = torus_report(DiscIndicator{static_cast<long>(R)}, 4000, 100 + R, 50);
    const double truth = kC * kPi * R * R;
    EXPECT_LT(std::abs(r.corrected_mean - truth), 3 * r.ci_radius) << R;
    EXPECT_GT(r.truncated_mass, 0.0);
  }
}

TEST(TorusMean, SectorGroundTruth) {
  const double half = 0.4;
  for (long R : {5, 10, 20}) {
    const auto r = torus_report(SectorIndicator{R, 0.3, half}, 1500, 200 + R, 50);
    const double truth = kC * half * R * R;
    EXPECT_LT(std::abs(r.corrected_mean - truth), 3 * r.ci_radius) << R;
  }
}

TEST(TorusMean, ConfidenceShrinksWithSamples) {
  const TestFunction f = DiscIndicator{5};
  const auto small = torus_report(f, 2000, 5, 50);
  const auto large = torus_report(f, 4000, 5, 50);
  EXPECT_NEAR(large.ci_radius / small.ci_radius, 1.0 / std::sqrt(2.0), 0.1);
}

TEST(TorusMean, EmptySupportIsZero) {
  const auto r = torus_report(AnnulusIndicator{2, 2}, 300, 3, 50);
  EXPECT_EQ(r.mean, 0.0);
  EXPECT_EQ(r.variance, 0.0);
}

TEST(CuspMoments, TruncatedMassFormula) {
  EXPECT_DOUBLE_EQ(haar_truncated_mass(50), 3.0 / (kPi * 50));
  const auto m = haar_cusp_moments(DiscIndicator{1}, 50);
  EXPECT_DOUBLE_EQ(m.truncated_mass, haar_truncated_mass(50));
  // Past y = 50 only +-(shortest vector) is primitive and shorter than 1.
  EXPECT_DOUBLE_EQ(m.mean, 2.0);
  EXPECT_DOUBLE_EQ(m.second_moment, 4.0);
}

TEST(StratumSampler, ZeroSpreadAndDeterminism) {
  const auto base = octagon_surface();
  const auto zero = sample_stratum_local(base, 0.0, 5, 1);
  for (const auto& s : zero) {
    EXPECT_EQ(s.surface, base);
    EXPECT_EQ(s.area, area(base));
  }
  const auto a = sample_stratum_local(base, 0.05, 20, 2, 1);
  const auto b = sample_stratum_local(base, 0.05, 20, 2, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].surface, b[i].surface);
    EXPECT_EQ(validate(a[i].surface).zero_orders, std::vector<int>{2});
    EXPECT_EQ(a[i].area, area(a[i].surface));
  }
  EXPECT_THROW(sample_stratum_local(base, -1.0, 5, 1), Error);
}

TEST(StratumSampler, LowAcceptanceThrows) {
  const auto thin = slit_torus({ratio(1, 1000), ratio(1, 1000)});
  try {
    sample_stratum_local(thin, 5.0, 20, 3);
    ADD_FAILURE() << "expected an acceptance-rate error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAcceptanceRate);
  }
}

TEST(StratumValues, MatchNormalizedTransform) {
  const auto samples = sample_stratum_local(octagon_surface(), 0.05, 10, 4);
  const TestFunction f = DiscIndicator{ratio(1, 2)};
  const auto v = stratum_values(samples, f, {}, 2);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    EXPECT_EQ(v[i], transform_normalized(samples[i].surface, f, samples[i].area).value);
  }
}

TEST(L2Estimate, VarianceDefinition) {
  const std::vector<double> counts = {10, 12, 14};
  const auto e = estimate_L2_and_variance(counts, 2.0, 1.0);
  const double L = (100.0 + 144.0 + 196.0) / 3.0;
  EXPECT_DOUBLE_EQ(e.L_hat, L);
  EXPECT_DOUBLE_EQ(e.V_hat, L - std::pow(kPi * 4.0, 2));
}

TEST(Tails, MonotoneAndDegenerate) {
  std::vector<double> values;
  for (int i = 0; i < 1000; ++i) values.push_back(std::floor(100.0 / (1 + i)));
  const auto t = tail_histogram(values, 50);
  ASSERT_EQ(t.exceedance.size(), 50u);
  for (std::size_t k = 1; k < t.exceedance.size(); ++k) {
    EXPECT_LE(t.exceedance[k], t.exceedance[k - 1]);
  }
  EXPECT_FALSE(t.degenerate);
  EXPECT_GT(t.q_hat, 0.0);

  const auto flat = tail_histogram(std::vector<double>(100, 0.0), 10);
  EXPECT_TRUE(flat.degenerate);
  EXPECT_THROW(tail_histogram(values, 0), Error);
}

TEST(Tails, PowerLawSlope) {
  // P(X > t) = t^-3 for X = U^(-1/3): the fitted exponent is near 3.
  std::vector<double> values;
  const int n = 200000;
  for (int i = 0; i < n; ++i) values.push_back(std::pow((i + 0.5) / n, -1.0 / 3.0));
  const auto t = tail_histogram(values, 30);
  EXPECT_NEAR(t.q_hat, 3.0, 0.1);
}

TEST(BorelCantelli, ChebyshevConsistency) {
  const auto samples = sample_torus_haar(1000, 12, 50);
  const std::vector<double> radii = {2, 4, 8, 16};
  std::vector<double> errors;
  for (double R : radii) errors.push_back(std::pow(R, 1.9));
  const auto rows = borel_cantelli_table(radii, errors, samples);
  ASSERT_EQ(rows.size(), 4u);
  double sum = 0.0;
  for (const auto& r : rows) {
    sum += r.ratio;
    EXPECT_DOUBLE_EQ(r.partial_sum, sum);
    EXPECT_TRUE(r.consistent) << r.R;
    EXPECT_LE(r.exceedance, r.chebyshev + 3 * r.binomial_ci);
  }
  EXPECT_THROW(borel_cantelli_table({4, 2}, {1, 1}, samples), Error);
  EXPECT_THROW(borel_cantelli_table({2, 4}, {1}, samples), Error);
}
