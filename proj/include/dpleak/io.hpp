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

// File formats.
//
//   Graph JSON     {"n": 4, "edges": [[0,1],...], "labels": ["a",...]}
//   Matrix CSV     header row of output labels (first cell is a corner
//                  label), then one row per input: label, cells. Cells are
//                  decimals or p/q literals.
//   Matrix JSON    {"row_labels": [...], "col_labels": [...],
//                   "entries": [["1/7", 0.25, ...], ...]}
//   Prior CSV      label,value per line.
//   Query map CSV  input_label,answer_label per line.
//
// Reports are JSON objects with exact values rendered as "p/q" strings or
// num/den integer-string pairs next to their floating renderings.

#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dpleak/automorphism.hpp"
#include "dpleak/bounds.hpp"
#include "dpleak/channel.hpp"
#include "dpleak/errors.hpp"
#include "dpleak/graph.hpp"
#include "dpleak/mechanisms.hpp"
#include "dpleak/oracle.hpp"
#include "dpleak/rational.hpp"

namespace dpleak {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Text helpers.

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline bool has_json_extension(std::string_view path) {
  return path.size() >= 5 && path.substr(path.size() - 5) == ".json";
}

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

// Non-empty, non-comment lines split into cells.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    rows.push_back(split_csv_line(trimmed));
  }
  return rows;
}

inline Rational json_rational(const Json& value) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<long long>());
  // nlohmann prints the shortest round-trip decimal, so 0.535 stays 535/1000.
  if (value.is_number()) return parse_rational(value.dump());
  throw ArgumentError("expected a number or a \"p/q\" string, got " + value.dump());
}

inline std::size_t index_of(const std::vector<std::string>& labels, const std::string& label,
                            const char* what) {
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (labels[k] == label) return k;
  throw ArgumentError(std::string("unknown ") + what + " label '" + label + "'");
}

inline std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < n; ++k) labels.push_back(std::to_string(k));
  return labels;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Graphs.

inline Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (auto [a, b] : g.edges()) edges.push_back({a, b});
  Json out{{"n", g.vertex_count()}, {"edges", std::move(edges)}};
  if (!g.labels().empty()) out["labels"] = g.labels();
  return out;
}

inline Graph graph_from_json(const Json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ArgumentError("edge must be a pair");
      edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return Graph(n, std::move(edges), std::move(labels));
  } catch (const Json::exception& e) {
    throw ArgumentError(std::string("malformed graph JSON: ") + e.what());
  }
}

inline Graph read_graph_file(const std::string& path) {
  try {
    return graph_from_json(Json::parse(read_text_file(path)));
  } catch (const Json::parse_error& e) {
    throw IoError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Channel matrices.

inline ChannelMatrix matrix_from_csv(const std::string& text,
                                     const Rational& row_sum_tolerance = 0) {
  const auto rows = detail::parse_csv(text);
  if (rows.size() < 2) throw ArgumentError("matrix CSV needs a header and at least one row");
  const std::vector<std::string> col_labels(rows[0].begin() + 1, rows[0].end());
  const std::size_t cols = col_labels.size();
  std::vector<std::string> row_labels;
  std::vector<Rational> entries;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != cols + 1)
      throw ArgumentError("matrix CSV row " + std::to_string(r) + " has " +
                          std::to_string(rows[r].size() - 1) + " cells, expected " +
                          std::to_string(cols));
    row_labels.push_back(rows[r][0]);
    for (std::size_t c = 1; c <= cols; ++c) entries.push_back(parse_rational(rows[r][c]));
  }
  const std::size_t n = row_labels.size();
  return ChannelMatrix(n, cols, std::move(entries), std::move(row_labels), col_labels,
                       row_sum_tolerance);
}

inline std::string matrix_to_csv(const ChannelMatrix& m) {
  std::string out = "In/Out";
  for (std::size_t j = 0; j < m.cols(); ++j) out += "," + m.col_label(j);
  out += "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += m.row_label(i);
    for (std::size_t j = 0; j < m.cols(); ++j) out += "," + to_string(m(i, j));
    out += "\n";
  }
  return out;
}

inline Json matrix_to_json(const ChannelMatrix& m) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    entries.push_back(std::move(row));
  }
  std::vector<std::string> rl, cl;
  for (std::size_t i = 0; i < m.rows(); ++i) rl.push_back(m.row_label(i));
  for (std::size_t j = 0; j < m.cols(); ++j) cl.push_back(m.col_label(j));
  return Json{{"row_labels", rl}, {"col_labels", cl}, {"entries", std::move(entries)}};
}

inline ChannelMatrix matrix_from_json(const Json& j, const Rational& row_sum_tolerance = 0) {
  try {
    const auto& rows = j.at("entries");
    if (!rows.is_array() || rows.empty()) throw ArgumentError("matrix JSON has no entries");
    const std::size_t cols = rows[0].size();
    std::vector<Rational> entries;
    for (const auto& row : rows) {
      if (row.size() != cols) throw ArgumentError("ragged matrix JSON");
      for (const auto& cell : row) entries.push_back(detail::json_rational(cell));
    }
    std::vector<std::string> rl, cl;
    if (j.contains("row_labels")) rl = j.at("row_labels").get<std::vector<std::string>>();
    if (j.contains("col_labels")) cl = j.at("col_labels").get<std::vector<std::string>>();
    return ChannelMatrix(rows.size(), cols, std::move(entries), std::move(rl), std::move(cl),
                         row_sum_tolerance);
  } catch (const Json::exception& e) {
    throw ArgumentError(std::string("malformed matrix JSON: ") + e.what());
  }
}

inline ChannelMatrix read_matrix_file(const std::string& path,
                                      const Rational& row_sum_tolerance = 0) {
  const std::string text = read_text_file(path);
  if (has_json_extension(path)) {
    try {
      return matrix_from_json(Json::parse(text), row_sum_tolerance);
    } catch (const Json::parse_error& e) {
      throw IoError("'" + path + "' is not valid JSON: " + e.what());
    }
  }
  return matrix_from_csv(text, row_sum_tolerance);
}

// ---------------------------------------------------------------------------
// Priors and query maps.

// Entries are matched to `labels` by name when given, else taken in file
// order.
inline Prior prior_from_csv(const std::string& text,
                            const std::vector<std::string>& labels = {}) {
  const auto rows = detail::parse_csv(text);
  std::vector<std::pair<std::string, Rational>> pairs;
  for (const auto& row : rows) {
    if (row.size() != 2) throw ArgumentError("prior lines must be label,value");
    pairs.emplace_back(row[0], parse_rational(row[1]));
  }
  if (labels.empty()) {
    std::vector<Rational> probs;
    for (auto& [label, p] : pairs) probs.push_back(p);
    return Prior(std::move(probs));
  }
  if (pairs.size() != labels.size())
    throw ArgumentError("prior has " + std::to_string(pairs.size()) + " entries for " +
                        std::to_string(labels.size()) + " inputs");
  std::vector<Rational> probs(labels.size());
  std::vector<char> seen(labels.size(), 0);
  for (auto& [label, p] : pairs) {
    const std::size_t k = detail::index_of(labels, label, "prior");
    if (seen[k]) throw ArgumentError("prior repeats label '" + label + "'");
    seen[k] = 1;
    probs[k] = p;
  }
  return Prior(std::move(probs));
}

inline std::vector<std::size_t> fmap_from_csv(const std::string& text,
                                              const std::vector<std::string>& input_labels,
                                              const std::vector<std::string>& answer_labels) {
  const auto rows = detail::parse_csv(text);
  std::vector<std::optional<std::size_t>> image(input_labels.size());
  for (const auto& row : rows) {
    if (row.size() != 2) throw ArgumentError("query map lines must be input,answer");
    const std::size_t x = detail::index_of(input_labels, row[0], "input");
    if (image[x]) throw ArgumentError("query map repeats input '" + row[0] + "'");
    image[x] = detail::index_of(answer_labels, row[1], "answer");
  }
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < image.size(); ++x) {
    if (!image[x]) throw ArgumentError("query map is missing input '" + input_labels[x] + "'");
    out.push_back(*image[x]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports.

// Finite doubles as numbers, infinities as the strings "inf" / "-inf".
inline Json real_to_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline Json bound_to_json(const BoundReport& report) {
  Json inputs{{"r", to_string(report.inputs.ratio)}};
  if (report.inputs.profile) inputs["profile"] = *report.inputs.profile;
  if (report.inputs.individuals) inputs["u"] = *report.inputs.individuals;
  if (report.inputs.values) inputs["v"] = *report.inputs.values;
  return Json{{"kind", to_string(report.kind)},
              {"bits", report.bits},
              {"probability", to_string(report.probability)},
              {"core_num", numerator(report.core).str()},
              {"core_den", denominator(report.core).str()},
              {"inputs", std::move(inputs)}};
}

inline Json audit_to_json(const DpAudit& audit, const ChannelMatrix& m) {
  Json out{{"eps_star", real_to_json(audit.eps_star)},
           {"max_ratio", audit.max_ratio ? Json(to_string(*audit.max_ratio)) : Json("inf")}};
  if (audit.worst_witness)
    out["witness"] = {{"row", m.row_label(audit.worst_witness->row)},
                      {"other_row", m.row_label(audit.worst_witness->other_row)},
                      {"col", m.col_label(audit.worst_witness->col)}};
  return out;
}

inline Json bundle_to_json(const MechanismBundle& bundle) {
  return Json{{"graph", graph_to_json(bundle.graph)},
              {"matrix", matrix_to_json(bundle.matrix)},
              {"r_num", numerator(bundle.pp.ratio()).str()},
              {"r_den", denominator(bundle.pp.ratio()).str()},
              {"c_num", numerator(bundle.c).str()},
              {"c_den", denominator(bundle.c).str()}};
}

inline MechanismBundle bundle_from_json(const Json& j) {
  try {
    const Rational r(BigInt(j.at("r_num").get<std::string>()),
                     BigInt(j.at("r_den").get<std::string>()));
    const Rational c(BigInt(j.at("c_num").get<std::string>()),
                     BigInt(j.at("c_den").get<std::string>()));
    return MechanismBundle{graph_from_json(j.at("graph")), matrix_from_json(j.at("matrix")),
                           PrivacyParameter::from_ratio(r), c};
  } catch (const Json::exception& e) {
    throw ArgumentError(std::string("malformed mechanism bundle: ") + e.what());
  } catch (const std::runtime_error& e) {
    throw ArgumentError(std::string("malformed mechanism bundle: ") + e.what());
  }
}

inline Json search_report_to_json(const SearchReport& report) {
  return Json{{"method", report.method},
              {"seed", report.seed},
              {"trials", report.trials},
              {"best_utility", to_string(report.best_utility)},
              {"best_utility_value", to_double(report.best_utility)},
              {"best_matrix", matrix_to_json(report.best_matrix)}};
}

}  // namespace dpleak
