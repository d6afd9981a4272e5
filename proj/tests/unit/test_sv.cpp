#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "corpus.hpp"
#include "saddlekit/error.hpp"
#include "saddlekit/geodesic.hpp"
#include "saddlekit/sv.hpp"

using namespace saddlekit;
using saddlekit::testing::fixed_corpus;
using saddlekit::testing::random_corpus;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(Transform, DiscExamples) {
  EXPECT_EQ(transform(square_torus(), DiscIndicator{1}).value, 4.0);
  for (const auto& [name, s] : fixed_corpus()) {
    // Any radius below the shortest connection gives 0.
    const Rational r = ratio(99, 100) * floor_sqrt(shortest(s).length_sq() * 10000) / 100;
    EXPECT_EQ(transform(s, DiscIndicator{r}).value, 0.0) << name;
  }
  EXPECT_EQ(transform(octagon_surface(), DiscIndicator{ratio(1, 10)}).value, 0.0);
}

TEST(Transform, SectorMatchesAngleFilter) {
  // Primitive vectors within pi/4 of the x axis, |v| <= 3: (1,0), (2,+-1)
  // inside, (1,+-1) on the boundary rays.
  const auto v = transform(square_torus(), SectorIndicator{3, 0.0, kPi / 4});
  std::size_t inside = 0, boundary = 0;
  for (const auto& p : primitive_points_in_disc(3)) {
    if (p.x > std::abs(p.y)) ++inside;
    if (p.x == std::abs(p.y)) ++boundary;
  }
  EXPECT_EQ(inside, 3u);
  EXPECT_GE(v.count, inside);
  EXPECT_EQ(v.count + v.ambiguous, inside + boundary);
}

TEST(Transform, AnnulusAndTriangle) {
  // Annuli partition the disc.
  const auto s = slit_torus({ratio(1, 3), ratio(1, 5)});
  const double d3 = transform(s, DiscIndicator{3}).value;
  const double d1 = transform(s, DiscIndicator{1}).value;
  EXPECT_EQ(transform(s, AnnulusIndicator{1, 3}).value, d3 - d1);
  const auto tri = transform(square_torus(), TriangleIndicator{kPi / 2, kPi / 8, 2.5});
  // Vertical triangle of height 2.5 and half-angle pi/8: (0,1), (0,2) is not
  // primitive, so only (0,1).
  EXPECT_EQ(tri.value, 1.0);
}

TEST(Transform, ContravariantUnderExactMatrices) {
  std::mt19937_64 rng(8);
  const auto base = square_torus();
  for (int i = 0; i < 15; ++i) {
    const ExactMatrix m = saddlekit::testing::random_sl2(rng);
    const Rational r = ratio(5, 2);
    std::size_t direct = 0;
    for (const auto& v : enumerate(base, 20).distinct_holonomies()) {
      if (apply_matrix(m, v).norm_sq() <= r * r) ++direct;
    }
    EXPECT_EQ(transform(apply_surface(m, base), DiscIndicator{r}).value,
              static_cast<double>(direct));
  }
}

TEST(Transform, NormalizedUsesAreaScaling) {
  const auto s = slit_torus({ratio(1, 3), ratio(1, 5)});
  for (const Rational r : {ratio(1, 2), Rational(1), Rational(2)}) {
    const auto n = transform_normalized(s, DiscIndicator{r}, 2);
    const auto direct = enumerate_sq(s, r * r * 2).size();
    EXPECT_EQ(n.value, static_cast<double>(direct));
  }
  EXPECT_EQ(transform_normalized(square_torus(), DiscIndicator{2}, 1).value, 8.0);
  EXPECT_THROW(transform_normalized(square_torus(), DiscIndicator{2}, 0), Error);
}

TEST(PairTransform, Examples) {
  const auto t = square_torus();
  EXPECT_EQ(pair_transform(t, DiscIndicator{1}, DiscIndicator{1}).value, 16.0);
  EXPECT_EQ(pair_transform(t, DiscIndicator{1}, DiscIndicator{2}).value, 32.0);
  EXPECT_EQ(pair_transform(t, DiscIndicator{ratio(1, 2)}, DiscIndicator{2}).value, 0.0);
}

TEST(PairTransform, SquareIdentityOnCorpus) {
  auto corpus = fixed_corpus();
  for (auto& n : random_corpus(100, 123)) corpus.push_back(n);
  std::size_t cases = 0;
  const std::vector<TestFunction> fs = {DiscIndicator{ratio(3, 2)}, AnnulusIndicator{1, 2}};
  for (const auto& [name, s] : corpus) {
    for (const auto& f : fs) {
      const double one = transform(s, f).value;
      EXPECT_EQ(pair_transform(s, f, f).value, one * one) << name;
      ++cases;
    }
  }
  EXPECT_GE(cases, 200u);
}

TEST(RotationalAverage, RadialAtOneIsExact) {
  const auto s = octagon_surface();
  const auto f = DiscIndicator{2};
  EXPECT_EQ(rotational_average(s, f, 1.0, 64).value, transform(s, f).value);
}

TEST(RotationalAverage, RefinementConverges) {
  const auto s = square_torus();
  const SectorIndicator f{3, kPi / 2, kPi / 6};
  const double a = rotational_average(s, f, 3.0, 1024).value;
  const double b = rotational_average(s, f, 3.0, 2048).value;
  EXPECT_NEAR(a, b, 0.05 * std::max(1.0, std::abs(b)));
}

TEST(SectorSandwich, Ordered) {
  const auto s = square_torus();
  for (const auto& [R, theta] : std::vector<std::pair<double, double>>{
           {5, kPi / 16}, {5, kPi / 32}, {10, kPi / 16}, {2, kPi / 8}}) {
    const auto w = sector_sandwich(s, R, theta);
    EXPECT_LE(w.lower, w.scaled + w.margin) << R << " " << theta;
    EXPECT_LE(w.scaled, w.upper + w.margin) << R << " " << theta;
  }
  const auto wide = sector_sandwich(s, 5, kPi / 16);
  const auto narrow = sector_sandwich(s, 5, kPi / 32);
  EXPECT_LT(narrow.upper - narrow.lower, wide.upper - wide.lower);
  EXPECT_THROW(sector_sandwich(s, 5, kPi / 4), Error);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(square_torus(), ratio(1, 2), ratio(1, 6)).label, ClassLabel::kH1);

  const auto thin = lattice_torus(ExactMatrix::diag(ratio(1, 8), 8));
  const auto c = classify(thin, ratio(1, 2), ratio(1, 6));
  EXPECT_EQ(c.label, ClassLabel::kOmega2);
  ASSERT_TRUE(c.cylinder.has_value());

  const auto slit = slit_torus({ratio(1, 100), ratio(1, 1000)});
  EXPECT_EQ(classify(slit, ratio(1, 2), ratio(1, 6)).label, ClassLabel::kOmega2);

  const auto marked = marked_torus({ratio(1, 2), ratio(1, 3)});
  EXPECT_EQ(classify(marked, 1, ratio(1, 6)).label, ClassLabel::kH2);

  EXPECT_THROW(classify(square_torus(), ratio(1, 2), ratio(1, 2)), Error);
}

TEST(Classify, ScaleTrigger) {
  // Once the horizontal curve drops below epsilon0 the label stays off H1.
  bool triggered = false;
  for (long c : {1, 2, 3, 4, 8, 16}) {
    const auto s = lattice_torus(ExactMatrix::diag(ratio(1, c), c));
    const auto label = classify(s, ratio(1, 2), ratio(1, 6)).label;
    if (ratio(1, c) < ratio(1, 2)) triggered = true;
    if (triggered) {
      EXPECT_NE(label, ClassLabel::kH1) << c;
    } else {
      EXPECT_EQ(label, ClassLabel::kH1) << c;
    }
  }
}

TEST(TestFunctionJson, RoundTripAndErrors) {
  const std::vector<TestFunction> fs = {
      DiscIndicator{ratio(5, 2)}, AnnulusIndicator{1, 3}, SectorIndicator{2, 0.25, 0.5},
      TriangleIndicator{1.0, 0.2, 3.0}, make_pair(DiscIndicator{1}, AnnulusIndicator{1, 2})};
  for (const auto& f : fs) {
    const std::string j = test_function_to_json(f);
    EXPECT_EQ(test_function_to_json(test_function_from_json(j)), j);
  }
  const auto sec = test_function_from_json(
      R"({"variant":"sector","r":"3","center":"0","half_angle":"pi/4"})");
  EXPECT_DOUBLE_EQ(std::get<SectorIndicator>(sec).half_angle, kPi / 4);
  EXPECT_THROW(test_function_from_json(R"({"variant":"blob"})"), Error);
  EXPECT_THROW(test_function_from_json(R"({"variant":"annulus","r1":"3","r2":"1"})"), Error);
}
