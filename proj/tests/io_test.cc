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


#include "dpleak/io.hpp"

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dpleak/oracle.hpp"

namespace dpleak {
namespace {

Rational Q(std::int64_t num, std::int64_t den = 1) { return make_rational(num, den); }

std::string DataPath(const std::string& name) { return std::string(DPLEAK_DATA_DIR) + "/" + name; }

std::filesystem::path ScratchDir() {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("dpleak_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                    "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
  std::filesystem::create_directories(dir);
  return dir;
}

TEST(GraphJsonTest, RoundTrip) {
  for (const Graph& g : {build_petersen(), build_hamming(2, 3), build_star(4), Graph(3, {})}) {
    const Graph back = graph_from_json(Json::parse(graph_to_json(g).dump()));
    EXPECT_EQ(back.vertex_count(), g.vertex_count());
    EXPECT_EQ(back.edges(), g.edges());
    EXPECT_EQ(back.labels(), g.labels());
  }
}

TEST(GraphJsonTest, Malformed) {
  EXPECT_THROW(graph_from_json(Json::parse(R"({"edges": []})")), ArgumentError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"n": 2, "edges": [[0]]})")), ArgumentError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"n": 2, "edges": [[0, 5]]})")), ArgumentError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"n": 2, "edges": [["a", 1]]})")), ArgumentError);
}

TEST(GraphJsonTest, Files) {
  const Graph g = read_graph_file(DataPath("two_bit_databases.json"));
  EXPECT_EQ(g.vertex_count(), 4u);
  EXPECT_EQ(g.label(3), "11");
  EXPECT_THROW(read_graph_file(DataPath("missing.json")), IoError);
  const auto dir = ScratchDir();
  write_text_file((dir / "bad.json").string(), "{not json");
  EXPECT_THROW(read_graph_file((dir / "bad.json").string()), IoError);
}

TEST(MatrixCsvTest, CityFixturesParse) {
  const ChannelMatrix m1 = read_matrix_file(DataPath("table1_m1.csv"), Q(1, 1000));
  EXPECT_EQ(m1, fixture_m1());
  const ChannelMatrix m2 = read_matrix_file(DataPath("table1_m2.csv"));
  EXPECT_EQ(m2, fixture_m2());
  EXPECT_EQ(m2.col_label(5), "F");
}

TEST(MatrixCsvTest, RoundTripRandomMatrices) {
  std::size_t checked = 0;
  for (const Graph& g : {build_cycle(5), build_hamming(2, 2), build_petersen()})
    for (const auto& m : random_dp_sample(g, PrivacyParameter::from_ratio(Q(2, 5)), 8, 21)) {
      EXPECT_EQ(matrix_from_csv(matrix_to_csv(m)), m);
      EXPECT_EQ(matrix_from_json(Json::parse(matrix_to_json(m).dump())), m);
      ++checked;
    }
  EXPECT_EQ(checked, 24u);
}

TEST(MatrixCsvTest, CommentsAndBlankLinesAreSkipped) {
  const auto m = matrix_from_csv("# header comment\n\nx,a,b\n\nr0,1/2,1/2\n# mid\nr1,0.25,3/4\n");
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m(1, 0), Q(1, 4));
  EXPECT_EQ(m.row_label(1), "r1");
}

TEST(MatrixCsvTest, Errors) {
  EXPECT_THROW(matrix_from_csv("x,a,b\n"), ArgumentError);
  EXPECT_THROW(matrix_from_csv("x,a,b\nr,1\n"), ArgumentError);
  EXPECT_THROW(matrix_from_csv("x,a,b\nr,1/2,zz\n"), ArgumentError);
  EXPECT_THROW(matrix_from_csv("x,a,b\nr,1/2,1/3\n"), ArgumentError);
  EXPECT_THROW(matrix_from_csv("x,a,b\nr,3/2,-1/2\n"), ArgumentError);
}

TEST(MatrixJsonTest, NumbersAndStrings) {
  const auto m = matrix_from_json(Json::parse(R"({"entries": [[0.5, "1/2"], [1, 0]]})"));
  EXPECT_EQ(m(0, 0), Q(1, 2));
  EXPECT_EQ(m(1, 0), Q(1));
  EXPECT_EQ(m.row_label(1), "1");
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"entries": []})")), ArgumentError);
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"entries": [[1], [0.5, 0.5]]})")), ArgumentError);
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"rows": 2})")), ArgumentError);
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"entries": [[true]]})")), ArgumentError);
}

TEST(PriorCsvTest, ByLabelAndByOrder) {
  const auto labels = city_labels();
  const Prior p = prior_from_csv(read_text_file(DataPath("city_prior.csv")), labels);
  EXPECT_EQ(p.probs(), city_skewed_prior().probs());
  const Prior shuffled = prior_from_csv("F,1/10\nA,1/10\nB,1/5\nC,1/5\nD,1/5\nE,1/5\n", labels);
  EXPECT_EQ(shuffled.probs(), city_skewed_prior().probs());
  const Prior ordered = prior_from_csv("x,1/3\ny,2/3\n");
  EXPECT_EQ(ordered[1], Q(2, 3));
}

TEST(PriorCsvTest, Errors) {
  const std::vector<std::string> labels = {"a", "b"};
  EXPECT_THROW(prior_from_csv("a,1/2\n", labels), ArgumentError);
  EXPECT_THROW(prior_from_csv("a,1/2\na,1/2\n", labels), ArgumentError);
  EXPECT_THROW(prior_from_csv("a,1/2\nz,1/2\n", labels), ArgumentError);
  EXPECT_THROW(prior_from_csv("a,1/2,3\nb,1/2\n", labels), ArgumentError);
  EXPECT_THROW(prior_from_csv("a,1/2\nb,1/3\n", labels), ArgumentError);
}

TEST(FmapCsvTest, ParityMap) {
  const auto f = fmap_from_csv(read_text_file(DataPath("parity_fmap.csv")),
                               {"00", "01", "10", "11"}, {"even", "odd"});
  EXPECT_EQ(f, (std::vector<std::size_t>{0, 1, 1, 0}));
}

TEST(FmapCsvTest, Errors) {
  const std::vector<std::string> in = {"x", "y"}, out = {"a"};
  EXPECT_THROW(fmap_from_csv("x,a\n", in, out), ArgumentError);
  EXPECT_THROW(fmap_from_csv("x,a\ny,b\n", in, out), ArgumentError);
  EXPECT_THROW(fmap_from_csv("x,a\nx,a\ny,a\n", in, out), ArgumentError);
  EXPECT_THROW(fmap_from_csv("x,a\nq,a\n", in, out), ArgumentError);
  EXPECT_THROW(fmap_from_csv("x\n", in, out), ArgumentError);
}

TEST(ReportJsonTest, BoundFields) {
  const auto b = hamming_leakage_bound(2, 2, PrivacyParameter::from_ratio(Q(1, 2)));
  const Json j = bound_to_json(b);
  EXPECT_EQ(j.at("kind"), "leakage");
  EXPECT_EQ(j.at("core_num"), "9");
  EXPECT_EQ(j.at("core_den"), "4");
  EXPECT_EQ(j.at("probability"), "4/9");
  EXPECT_EQ(j.at("inputs").at("u"), 2);
  EXPECT_EQ(j.at("inputs").at("r"), "1/2");
  EXPECT_NEAR(j.at("bits").get<double>(), 2 * std::log2(4.0 / 3.0), 1e-12);
}

TEST(ReportJsonTest, AuditInfinityIsAString) {
  const ChannelMatrix id = ChannelMatrix::from_rows({{Q(1), Q(0)}, {Q(0), Q(1)}});
  const Json j = audit_to_json(dp_audit(id, build_clique(2)), id);
  EXPECT_EQ(j.at("eps_star"), "inf");
  EXPECT_EQ(j.at("max_ratio"), "inf");
  EXPECT_TRUE(j.contains("witness"));
  EXPECT_EQ(real_to_json(1.5), 1.5);
}

TEST(ReportJsonTest, BundleRoundTrip) {
  const auto bundle = optimal_mechanism(build_cycle(6), PrivacyParameter::from_ratio(Q(1, 2)));
  const Json j = bundle_to_json(bundle);
  const auto back = bundle_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.matrix, bundle.matrix);
  EXPECT_EQ(back.c, Q(8, 21));
  EXPECT_EQ(back.pp.ratio(), Q(1, 2));
  EXPECT_EQ(bundle_to_json(back).dump(), j.dump());
  EXPECT_THROW(bundle_from_json(Json::parse(R"({"r_num": "1"})")), ArgumentError);
}

TEST(ReportJsonTest, SearchReport) {
  const auto report = grid_search_optimal(build_clique(2), PrivacyParameter::from_ratio(Q(1, 2)),
                                          Q(1, 6));
  const Json j = search_report_to_json(report);
  EXPECT_EQ(j.at("method"), "grid");
  EXPECT_EQ(j.at("best_utility"), "2/3");
  EXPECT_EQ(j.at("best_matrix").at("entries").size(), 2u);
}

}  // namespace
}  // namespace dpleak
