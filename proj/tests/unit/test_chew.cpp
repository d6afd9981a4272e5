#include <gtest/gtest.h>

#include <cmath>
#include <variant>

#include "corpus.hpp"
#include "saddlekit/chew.hpp"
#include "saddlekit/geodesic.hpp"

using namespace saddlekit;
using saddlekit::testing::fixed_corpus;
using saddlekit::testing::random_corpus;

namespace {

ExactVector step_sum(const ChewPath& p) {
  ExactVector s;
  for (const auto& v : p.steps) s += v;
  return s;
}

SaddleConnection find(const TranslationSurface& s, const ExactVector& h, const Rational& R) {
  for (const auto& c : enumerate(s, R).connections) {
    if (c.holonomy == h) return c;
  }
  ADD_FAILURE() << "no connection with holonomy " << format_rational(h.x) << ","
                << format_rational(h.y);
  return {};
}

void check_path(const ChewPath& p, const ExactVector& target, const std::string& what) {
  EXPECT_EQ(step_sum(p), target) << what;
  EXPECT_EQ(p.target, target) << what;
  EXPECT_TRUE(within_sqrt10(p)) << what;
  ASSERT_EQ(p.vertices.size(), p.steps.size() + 1) << what;
  for (std::size_t k = 0; k < p.steps.size(); ++k) {
    EXPECT_EQ(p.vertices[k] + p.steps[k], p.vertices[k + 1]) << what;
  }
}

}  // namespace

TEST(ChewPath, DelaunayEdgeIsItsOwnPath) {
  const auto t = delaunay_l1(square_torus());
  const auto beta = find(t.surface, {1, 0}, 1);
  const auto p = chew_path(t, beta);
  ASSERT_EQ(p.steps.size(), 1u);
  EXPECT_DOUBLE_EQ(p.ratio_upper_bound, 1.0);
}

TEST(ChewPath, TorusTwoOne) {
  const auto s = square_torus();
  const auto t = delaunay_l1(s);
  const auto p = chew_path(t, find(t.surface, {2, 1}, 3));
  check_path(p, {2, 1}, "(2,1)");
  // Sum of lengths at most 1 + sqrt(2) + a rounding margin.
  EXPECT_LE(p.ratio_upper_bound * std::sqrt(5.0), 1.0 + std::sqrt(2.0) + 1e-9);
}

TEST(ChewPath, RandomSurfacesWithinSqrt10) {
  std::size_t checked = 0;
  auto corpus = random_corpus(20, 77);
  for (auto& n : fixed_corpus()) corpus.push_back(n);
  for (const auto& [name, s] : corpus) {
    const auto t = delaunay_l1(s);
    for (const auto& c : enumerate(t.surface, 5).connections) {
      check_path(chew_path(t, c), c.holonomy, name);
      ++checked;
    }
  }
  EXPECT_GE(checked, 100u);
}

TEST(ChewPath, FollowsParallelLemma) {
  // A path that runs along the short curve more than 2M + 1 times must cross
  // a cylinder bounded by it.
  std::size_t triggered = 0;
  std::vector<saddlekit::testing::Named> corpus = {
      {"thin", lattice_torus(ExactMatrix::diag(ratio(1, 8), 8))},
      {"slit", slit_torus({ratio(1, 9), ratio(1, 50)})},
  };
  for (const auto& [name, s] : corpus) {
    const auto t = delaunay_l1(s);
    const auto gamma = shortest(t.surface);
    const std::size_t M = t.surface.triangle_count();
    for (const auto& c : enumerate(t.surface, 12).connections) {
      const auto p = chew_path(t, c);
      const std::size_t k = follows_parallel_count(p, gamma);
      if (k > 2 * M + 1) {
        ++triggered;
        EXPECT_TRUE(std::holds_alternative<Cylinder>(detect_cylinder(t.surface, gamma, 100)))
            << name;
      }
    }
  }
  EXPECT_GT(triggered, 0u);
}

TEST(FollowsParallel, CountsParallelSteps) {
  ChewPath p;
  SaddleConnection gamma;
  gamma.holonomy = {1, 0};
  EXPECT_EQ(follows_parallel_count(p, gamma), 0u);
  for (int k = 0; k < 4; ++k) p.steps.push_back({1, 0});
  p.steps.push_back({0, 1});
  p.steps.push_back({-2, 0});
  EXPECT_EQ(follows_parallel_count(p, gamma), 5u);
  gamma.holonomy = {1, 1};
  EXPECT_EQ(follows_parallel_count(p, gamma), 0u);
}

TEST(PlanarChew, SmallExamples) {
  const std::vector<ExactVector> two = {{0, 0}, {3, 1}};
  const auto p2 = planar_chew(two, 0, 1);
  ASSERT_EQ(p2.steps.size(), 1u);
  EXPECT_EQ(p2.steps[0], (ExactVector{3, 1}));

  const std::vector<ExactVector> square = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const auto p = planar_chew(square, 0, 3);
  EXPECT_EQ(step_sum(p), (ExactVector{1, 1}));
  EXPECT_TRUE(total_length_at_most(p.steps, 4));
}

TEST(PlanarChew, RandomSetsWithinSqrt10) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 19;
    const auto pts = saddlekit::testing::random_points(rng, n, 200, 13);
    const auto pd = planar_delaunay(pts);
    for (int a = 0; a < static_cast<int>(n); ++a) {
      for (int b = a + 1; b < static_cast<int>(n); ++b) {
        check_path(planar_chew(pd, a, b), pts[b] - pts[a], "planar");
      }
    }
  }
}

TEST(TotalLength, ExactSmallCases) {
  EXPECT_TRUE(total_length_at_most({{3, 4}}, 25));
  EXPECT_FALSE(total_length_at_most({{3, 4}}, 24));
  // 1 + 1 = 2 exactly.
  EXPECT_TRUE(total_length_at_most({{1, 0}, {0, 1}}, 4));
  EXPECT_FALSE(total_length_at_most({{1, 0}, {0, 1}}, ratio(399, 100)));
  // sqrt(2) + sqrt(2) + 1 vs sqrt(14.6): 3.8284 vs 3.8210.
  EXPECT_FALSE(total_length_at_most({{1, 1}, {1, 1}, {1, 0}}, ratio(146, 10)));
  EXPECT_TRUE(total_length_at_most({{1, 1}, {1, 1}, {1, 0}}, ratio(147, 10)));
}

TEST(ChewJson, HasSteps) {
  const auto t = delaunay_l1(square_torus());
  const std::string j = chew_to_json(chew_path(t, find(t.surface, {2, 1}, 3)));
  EXPECT_NE(j.find("\"edges\""), std::string::npos);
}
