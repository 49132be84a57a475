// Copyright 2026 The dpleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "dpleak/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace dpleak::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Data(const std::string& name) { return std::string(DPLEAK_DATA_DIR) + "/" + name; }

bool Contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::filesystem::path Scratch() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  const auto dir = std::filesystem::temp_directory_path() /
                   (std::string("dpleak_cli_") + info->test_suite_name() + "_" + info->name());
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

TEST(CliGraphTest, HammingIsBothClasses) {
  const auto r = Invoke({"graph", "--family", "hamming:3,2"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_TRUE(Contains(r.out, "distance-regular: yes; VT+: yes")) << r.out;
  EXPECT_TRUE(Contains(r.out, "hamming-translations"));
}

TEST(CliGraphTest, PetersenArray) {
  const auto r = Invoke({"graph", "--family", "petersen"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_TRUE(Contains(r.out, "intersection array: b=(3,2), c=(1,1)")) << r.out;
}

TEST(CliGraphTest, PathIsNotVtPlus) {
  const auto r = Invoke({"graph", "--family", "path:3"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_TRUE(Contains(r.out, "VT+: no")) << r.out;
  EXPECT_TRUE(Contains(r.out, "[depends on base vertex]"));
}

TEST(CliGraphTest, JsonAndFileInput) {
  const auto r = Invoke({"graph", "--graph", Data("two_bit_databases.json"), "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("distance_regular"), true);
}

TEST(CliGraphTest, UsageAndArgumentErrors) {
  EXPECT_EQ(Invoke({}).code, kUsage);
  EXPECT_EQ(Invoke({"graph", "--bogus"}).code, kUsage);
  EXPECT_EQ(Invoke({"graph", "--family", "torus:3"}).code, kInvalid);
  EXPECT_EQ(Invoke({"graph"}).code, kInvalid);
  EXPECT_EQ(Invoke({"graph", "--family", "cycle:2"}).code, kInvalid);
  EXPECT_EQ(Invoke({"graph", "--graph", Data("nope.json")}).code, kIo);
}

TEST(CliGraphTest, SizeCapIsAResourceError) {
  const auto r = Invoke({"graph", "--family", "hamming:20,2"});
  EXPECT_EQ(r.code, kResource);
  EXPECT_TRUE(Contains(r.err, "error:"));
}

TEST(CliAnalyzeTest, OptimalFixtureAttainsBound) {
  const auto r = Invoke({"analyze", "--fixture", "m2", "--family", "clique:6", "--ratio", "1/2"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(Contains(r.out, "utility (binary gain, optimal guess): 2/7")) << r.out;
  EXPECT_TRUE(Contains(r.out, "attains bound: yes"));
}

TEST(CliAnalyzeTest, RoundedMatrixIsDpAtLnTwo) {
  const auto r = Invoke({"analyze", "--matrix", Data("table1_m1.csv"), "--family", "clique:6",
                      "--epsilon", "ln2", "--tol", "1e-2"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(Contains(r.out, "(tol 0.010000000): yes")) << r.out;
  // Three-decimal rounding pushes the worst ratio just past 2.
  const auto strict = Invoke({"analyze", "--matrix", Data("table1_m1.csv"), "--family", "clique:6",
                           "--epsilon", "ln2", "--tol", "0"});
  EXPECT_TRUE(Contains(strict.out, "): no")) << strict.out;
  const auto f = Invoke({"analyze", "--fixture", "m1", "--family", "clique:6", "--epsilon", "ln2"});
  ASSERT_EQ(f.code, kOk) << f.err;
  EXPECT_TRUE(Contains(f.out, ": yes")) << f.out;
  EXPECT_TRUE(Contains(f.out, "attains bound: no"));
  EXPECT_TRUE(Contains(f.out, "0.2243"));
}

TEST(CliAnalyzeTest, SkewedPriorJson) {
  const auto r = Invoke({"analyze", "--fixture", "m2", "--family", "clique:6", "--ratio", "1/2",
                      "--prior", Data("city_prior.csv"), "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("utility"), "2/7");
  EXPECT_EQ(j.at("attains_bound"), "n/a (non-uniform prior)");
  EXPECT_EQ(j.at("is_dp_exact"), true);
}

TEST(CliAnalyzeTest, PrivacyArgumentErrors) {
  EXPECT_EQ(Invoke({"analyze", "--fixture", "m2", "--family", "clique:6", "--ratio", "1/2",
                 "--epsilon", "0.5"})
                .code,
            kInvalid);
  EXPECT_EQ(Invoke({"analyze", "--fixture", "m2", "--family", "clique:6", "--ratio", "3/2"}).code,
            kInvalid);
  EXPECT_EQ(Invoke({"analyze", "--fixture", "m3"}).code, kUsage);
  EXPECT_EQ(Invoke({"analyze", "--fixture", "m2", "--family", "clique:5"}).code, kInvalid);
}

TEST(CliSynthTest, CliqueAndCycle) {
  const auto clique = Invoke({"synth", "--family", "clique:6", "--ratio", "1/2"});
  ASSERT_EQ(clique.code, kOk) << clique.err;
  EXPECT_TRUE(Contains(clique.out, "0,2/7,1/7,1/7,1/7,1/7,1/7"));
  const auto cycle = Invoke({"synth", "--family", "cycle:6", "--ratio", "1/2"});
  EXPECT_TRUE(Contains(cycle.out, "utility (uniform prior): 8/21")) << cycle.out;
  const auto flat = Invoke({"synth", "--family", "petersen", "--ratio", "1"});
  EXPECT_TRUE(Contains(flat.out, "utility (uniform prior): 1/10")) << flat.out;
  EXPECT_EQ(Invoke({"synth", "--family", "path:4", "--ratio", "1/2"}).code, kInvalid);
}

TEST(CliSynthTest, BundleFileIsReproducible) {
  const auto dir = Scratch();
  const std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
  ASSERT_EQ(Invoke({"synth", "--family", "hamming:2,3", "--ratio", "1/3", "--out", a}).code, kOk);
  ASSERT_EQ(Invoke({"synth", "--family", "hamming:2,3", "--ratio", "1/3", "--out", b}).code, kOk);
  EXPECT_EQ(read_text_file(a), read_text_file(b));
  const auto bundle = bundle_from_json(Json::parse(read_text_file(a)));
  EXPECT_EQ(bundle.c, 1 / profile_core({1, 4, 4}, Rational(1, 3)));
  EXPECT_EQ(Invoke({"synth", "--family", "clique:2", "--ratio", "1/2", "--out",
                 (dir / "missing" / "x.json").string()})
                .code,
            kIo);
}

TEST(CliSynthTest, ObliviousComposition) {
  const auto r = Invoke({"synth", "--graph", Data("parity_answers.json"), "--epsilon", "ln2",
                      "--input-graph", Data("two_bit_databases.json"), "--fmap",
                      Data("parity_fmap.csv")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(Contains(r.out, "eps_star on inputs: 0.693147")) << r.out;
  EXPECT_TRUE(Contains(r.out, "11,2/3,1/3"));
  EXPECT_EQ(Invoke({"synth", "--graph", Data("parity_answers.json"), "--epsilon", "ln2", "--fmap",
                 Data("parity_fmap.csv")})
                .code,
            kInvalid);
}

TEST(CliTransformTest, WritesBothForms) {
  const auto dir = Scratch();
  const std::string d = (dir / "d.csv").string(), s = (dir / "s.csv").string();
  const auto r = Invoke({"transform", "--fixture", "m1", "--family", "clique:6", "--diagonal-out", d,
                      "--symmetric-out", s});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(Contains(r.out, "(preserved)")) << r.out;
  const auto sym = matrix_from_csv(read_text_file(s));
  EXPECT_TRUE(is_symmetric_form(sym));
  EXPECT_EQ(sym(0, 0), posterior_success(Prior::uniform(6), fixture_m1()));
  EXPECT_TRUE(is_diagonal_form(matrix_from_csv(read_text_file(d))));
}

TEST(CliTransformTest, RejectsUnsuitableGraph) {
  EXPECT_EQ(Invoke({"transform", "--fixture", "m2", "--family", "path:6"}).code, kInvalid);
}

TEST(CliCompareTest, WideCsv) {
  const auto r = Invoke({"compare", "--matrix", "m1", "--matrix", "m2", "--prior",
                      Data("city_prior.csv")});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::istringstream lines(r.out);
  std::string header, uniform, skewed;
  std::getline(lines, header);
  std::getline(lines, uniform);
  std::getline(lines, skewed);
  EXPECT_EQ(header, "prior,m1_utility,m1_leakage_bits,m2_utility,m2_leakage_bits");
  EXPECT_EQ(uniform.rfind("uniform,0.2243", 0), 0u) << uniform;
  EXPECT_EQ(skewed.rfind("city_prior,0.241", 0), 0u) << skewed;
  EXPECT_TRUE(Contains(uniform, ",0.285714,"));
}

TEST(CliOracleTest, GridAndHillclimb) {
  const auto grid = Invoke({"oracle", "--family", "clique:2", "--ratio", "1/2", "--method", "grid",
                         "--step", "1/24"});
  ASSERT_EQ(grid.code, kOk) << grid.err;
  EXPECT_TRUE(Contains(grid.out, "best utility: 2/3")) << grid.out;
  EXPECT_TRUE(Contains(grid.out, "(not exceeded)"));

  const auto a = Invoke({"oracle", "--family", "cycle:6", "--ratio", "1/2", "--iters", "500",
                      "--seed", "7", "--format", "json"});
  const auto b = Invoke({"oracle", "--family", "cycle:6", "--ratio", "1/2", "--iters", "500",
                      "--seed", "7", "--format", "json"});
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(Json::parse(a.out).at("exceeds_bound"), false);

  const auto rnd = Invoke({"oracle", "--family", "petersen", "--ratio", "1/2", "--method", "random",
                        "--count", "5"});
  EXPECT_TRUE(Contains(rnd.out, "matrices: 5")) << rnd.out;
  EXPECT_EQ(Invoke({"oracle", "--family", "clique:4", "--ratio", "1/2", "--method", "grid"}).code,
            kResource);
  EXPECT_EQ(Invoke({"oracle", "--family", "clique:2", "--ratio", "1/2", "--method", "magic"}).code,
            kUsage);
}

TEST(CliBinaryTest, ExecutableRuns) {
  const std::string cmd = std::string("\"") + DPLEAK_CLI_PATH + "\" graph --family petersen > " +
                          (Scratch() / "out.txt").string();
  EXPECT_EQ(std::system(cmd.c_str()), 0);
}

}  // namespace
}  // namespace dpleak::cli
