#include <gtest/gtest.h>

#include <algorithm>

#include "corpus.hpp"
#include "saddlekit/delaunay.hpp"
#include "saddlekit/error.hpp"
#include "saddlekit/geodesic.hpp"

using namespace saddlekit;
using saddlekit::testing::fixed_corpus;
using saddlekit::testing::random_corpus;

namespace {

bool has_edge(const TranslationSurface& s, const ExactVector& v) {
  for (const auto& t : s.triangles()) {
    for (const auto& e : t.edges) {
      if (e == v || e == -v) return true;
    }
  }
  return false;
}

}  // namespace

TEST(Diamond, Examples) {
  const auto d = diamond_of({0, 0}, {2, 0}, {1, 1});
  EXPECT_EQ(d.center, (ExactVector{1, 0}));
  EXPECT_EQ(d.radius_l1, Rational(1));
  const auto m = diamond_of({0, 0}, {2, 0}, {1, -1});
  EXPECT_EQ(m.center, (ExactVector{1, 0}));
  EXPECT_EQ(m.radius_l1, Rational(1));
  try {
    diamond_of({0, 0}, {1, 0}, {2, 0});
    ADD_FAILURE() << "collinear points accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCollinear);
  }
}

TEST(Diamond, SidesAndEquidistance) {
  const auto d = diamond_of({0, 0}, {2, 0}, {1, 1});
  EXPECT_EQ(diamond_side(d, {1, 0}), -1);
  EXPECT_EQ(diamond_side(d, {1, -1}), 0);
  EXPECT_EQ(diamond_side(d, {3, 3}), 1);

  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 300) {
    const auto p = saddlekit::testing::random_points(rng, 3, 50, 7);
    if (cross(p[1] - p[0], p[2] - p[0]) == 0) continue;
    DiamondCertificate c;
    try {
      c = diamond_of(p[0], p[1], p[2]);
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::kAmbiguousDiamond);
      continue;
    }
    ++checked;
    for (const auto& q : p) EXPECT_EQ((q - c.center).norm_l1(), c.radius_l1);
  }
}

TEST(LocallyDelaunay, TorusEdgesAndSkewDiagonal) {
  const auto torus = square_torus();
  for (int t = 0; t < 2; ++t) {
    for (int e = 0; e < 3; ++e) EXPECT_TRUE(is_locally_delaunay(torus, {t, e}));
  }
  const auto skew = lattice_torus(ExactMatrix{1, 3, 0, 1});
  bool any_false = false;
  for (int t = 0; t < 2; ++t) {
    for (int e = 0; e < 3; ++e) any_false = any_false || !is_locally_delaunay(skew, {t, e});
  }
  EXPECT_TRUE(any_false);
}

TEST(DelaunayL1, Examples) {
  const auto t = delaunay_l1(square_torus());
  EXPECT_EQ(t.flip_count, 0u);
  EXPECT_TRUE(verify_delaunay(t));

  const auto skew = delaunay_l1(lattice_torus(ExactMatrix{1, 3, 0, 1}));
  EXPECT_GT(skew.flip_count, 0u);
  EXPECT_TRUE(verify_delaunay(skew));
  EXPECT_TRUE(has_edge(skew.surface, {1, 0}));
  EXPECT_EQ(area(skew.surface), Rational(1));
}

TEST(DelaunayL1, ShortestConnectionIsAnEdge) {
  auto corpus = fixed_corpus();
  for (auto& n : random_corpus(30, 41)) corpus.push_back(n);
  for (const auto& [name, s] : corpus) {
    const auto t = delaunay_l1(s);
    ASSERT_TRUE(verify_delaunay(t)) << name;
    EXPECT_EQ(validate(t.surface), validate(s)) << name;
    EXPECT_TRUE(has_edge(t.surface, shortest(s).holonomy)) << name;
  }
}

TEST(DelaunayL1, PlanarMatchesBruteForce) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + trial % 10;
    const auto pts = saddlekit::testing::random_points(rng, n);
    const PlanarTorus torus = wrap_planar(pts);
    const auto t = delaunay_l1(torus.surface);
    const Rational safe = planar_safe_radius(torus);
    auto got = planar_triangles(torus, t, safe);
    auto want = planar_delaunay_brute_force(pts, safe);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want) << "trial " << trial;
  }
}

TEST(DelaunayL1, JsonCarriesCertificates) {
  const std::string j = delaunay_to_json(delaunay_l1(octagon_surface()));
  EXPECT_NE(j.find("\"certificates\""), std::string::npos);
  EXPECT_NE(j.find("\"flip_count\""), std::string::npos);
}
