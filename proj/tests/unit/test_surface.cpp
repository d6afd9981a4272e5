#include <gtest/gtest.h>

#include <fstream>
#include <numeric>
#include <sstream>

#include "corpus.hpp"
#include "saddlekit/error.hpp"
#include "saddlekit/surface.hpp"

using namespace saddlekit;
using saddlekit::testing::fixed_corpus;
using saddlekit::testing::random_corpus;

namespace {

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(SADDLEKIT_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorCode code_of(const TranslationSurface& s) {
  try {
    validate(s);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "surface validated";
  return ErrorCode::kMalformed;
}

}  // namespace

TEST(Validate, Signatures) {
  const auto torus = validate(square_torus());
  EXPECT_EQ(torus.zero_orders, std::vector<int>{0});
  EXPECT_EQ(torus.genus, 1);
  EXPECT_EQ(torus.relative_dimension, 2);

  const auto oct = validate(octagon_surface());
  EXPECT_EQ(oct.zero_orders, std::vector<int>{2});
  EXPECT_EQ(oct.genus, 2);
  EXPECT_EQ(oct.relative_dimension, 4);

  const auto slit = validate(slit_torus({ratio(1, 3), ratio(1, 5)}));
  EXPECT_EQ(slit.zero_orders, (std::vector<int>{1, 1}));
  EXPECT_EQ(slit.genus, 2);
  EXPECT_EQ(slit.relative_dimension, 5);

  const auto marked = validate(marked_torus({ratio(1, 2), ratio(1, 3)}));
  EXPECT_EQ(marked.zero_orders, (std::vector<int>{0, 0}));
  EXPECT_EQ(marked.marked_points, 2);
  EXPECT_EQ(marked.relative_dimension, 3);
}

TEST(Validate, GenusMatchesZeroOrders) {
  auto corpus = fixed_corpus();
  for (auto& n : random_corpus(20, 3)) corpus.push_back(n);
  for (const auto& [name, s] : corpus) {
    const auto sig = validate(s);
    const int sum = std::accumulate(sig.zero_orders.begin(), sig.zero_orders.end(), 0);
    EXPECT_EQ(sum, 2 * sig.genus - 2) << name;
    EXPECT_EQ(sig.relative_dimension, 2 * sig.genus + sig.marked_points - 1) << name;
  }
}

TEST(Validate, RejectsBrokenSurfaces) {
  EXPECT_EQ(code_of(surface_from_json(read_data("bad_edge_sum.json"))), ErrorCode::kEdgeSum);

  // The torus with x and y swapped: clockwise triangles.
  const auto flipped = surface_from_json(
      R"({"gluings":[[[0,0],[1,1]],[[0,1],[1,2]],[[0,2],[1,0]]],"triangles":[)"
      R"({"edges":[["0","1"],["1","0"],["-1","-1"]]},{"edges":[["1","1"],["0","-1"],["-1","0"]]}]})");
  EXPECT_EQ(code_of(flipped), ErrorCode::kNonpositiveArea);
}

TEST(Area, ExamplesAndDeterminantScaling) {
  EXPECT_EQ(area(square_torus()), Rational(1));
  EXPECT_EQ(area(octagon_surface()), Rational(7));
  EXPECT_EQ(area(apply_surface(ExactMatrix::diag(2, ratio(1, 2)), square_torus())), Rational(1));
  EXPECT_EQ(area(slit_torus({ratio(1, 3), ratio(1, 5)})), Rational(2));

  for (const auto& [name, s] : fixed_corpus()) {
    const ExactMatrix m{ratio(3, 2), ratio(1, 4), ratio(-1, 3), ratio(5, 7)};
    EXPECT_EQ(area(apply_surface(m, s)), abs(m.det()) * area(s)) << name;
  }
}

TEST(ApplySurface, IdentityAndDiagonal) {
  const auto s = square_torus();
  EXPECT_EQ(apply_surface(ExactMatrix::identity(), s), s);
  const auto d = apply_surface(ExactMatrix::diag(2, ratio(1, 2)), s);
  for (const auto& t : d.triangles()) {
    for (const auto& e : t.edges) {
      // Every edge lies in 2Z x (1/2)Z.
      EXPECT_EQ(Rational(e.x / 2).get_den(), 1);
      EXPECT_EQ(Rational(2 * e.y).get_den(), 1);
    }
  }
}

TEST(ApplySurface, PreservesSignature) {
  std::mt19937_64 rng(17);
  for (const auto& [name, s] : fixed_corpus()) {
    const auto sig = validate(s);
    for (int i = 0; i < 5; ++i) {
      const ExactMatrix m = saddlekit::testing::random_sl2(rng);
      EXPECT_EQ(validate(apply_surface(m, s)), sig) << name;
    }
  }
}

TEST(SurfaceJson, RoundTripAndFixtures) {
  for (const auto& [name, s] : fixed_corpus()) {
    EXPECT_EQ(surface_from_json(surface_to_json(s)), s) << name;
  }
  EXPECT_EQ(surface_from_json(read_data("torus.json")), square_torus());
  EXPECT_EQ(surface_from_json(read_data("octagon.json")), octagon_surface());
  EXPECT_EQ(surface_from_json(read_data("slit_torus.json")),
            slit_torus({ratio(1, 3), ratio(1, 5)}));
  EXPECT_THROW(surface_from_json("{\"triangles\": 3}"), Error);
  EXPECT_THROW(surface_from_json("not json"), Error);
}
