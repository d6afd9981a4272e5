#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "saddlekit/geodesic.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "saddlekit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = saddlekit::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& name) { return std::string(SADDLEKIT_TEST_DATA) + "/" + name; }

}  // namespace

TEST(Cli, CountMatchesLibrary) {
  for (const char* file : {"torus.json", "octagon.json", "slit_torus.json"}) {
    const auto r = run({"count", "--surface", data(file), "--radius", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in(data(file));
    std::stringstream ss;
    ss << in.rdbuf();
    const auto s = saddlekit::surface_from_json(ss.str());
    EXPECT_EQ(json::parse(r.out).at("count").get<std::size_t>(), saddlekit::count(s, 5)) << file;
  }
  const auto t = run({"count", "--surface", data("torus.json"), "--radius", "10"});
  EXPECT_EQ(json::parse(t.out).at("count").get<int>(), 192);
}

TEST(Cli, ValidateReportsSignature) {
  const auto r = run({"validate", "--surface", data("octagon.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("genus").get<int>(), 2);
}

TEST(Cli, DomainErrorExitsOneWithCode) {
  const auto r = run({"validate", "--surface", data("bad_edge_sum.json")});
  EXPECT_EQ(r.code, 1);
  const auto j = json::parse(r.err);
  EXPECT_EQ(j.at("error").get<std::string>(), "EDGE_SUM");
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"count", "--surface", data("torus.json"), "--radius", "1", "--bogus"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"count", "--surface", data("torus.json"), "--radius", "0.1.2"}).code, 2);
  EXPECT_EQ(run({"count", "--surface", data("missing.json"), "--radius", "1"}).code, 2);
  EXPECT_EQ(run({"validate", "--surface", data("torus.json"), "--seed", "3"}).code, 2);
}

TEST(Cli, McTorusDeterministicAcrossThreads) {
  const std::vector<std::string> base = {"mc-torus", "--radius", "5", "--samples", "300",
                                         "--seed", "11", "--ymax", "50"};
  auto one = base, four = base;
  one.insert(one.end(), {"--threads", "1"});
  four.insert(four.end(), {"--threads", "4"});
  const auto a = run(one), b = run(four);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out).at("seed").get<std::uint64_t>(), 11u);
}

TEST(Cli, CsvOutput) {
  const auto r = run({"enumerate", "--surface", data("torus.json"), "--radius", "1", "--format",
                      "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("x_num,", 0), 0u);
}

TEST(Cli, SlitExactFlagsHalfPeriod) {
  const auto r = run({"slit-exact", "--radius", "2", "--slit", "1/2,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out).at("flagged").get<bool>());
}
