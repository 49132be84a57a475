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

// Mechanism synthesis and utility evaluation.
//
// On a graph whose distance profile does not depend on the base vertex the
// matrix H[i][j] = c r^d(i,j), c = 1 / sum_d n_d r^d, is row-stochastic,
// epsilon-DP, and attains the utility and leakage bounds.

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpleak/bounds.hpp"
#include "dpleak/channel.hpp"
#include "dpleak/errors.hpp"
#include "dpleak/graph.hpp"
#include "dpleak/rational.hpp"

namespace dpleak {

class GainFunction {
 public:
  enum class Kind { kBinary, kTable };

  static GainFunction binary() { return GainFunction(Kind::kBinary, {}); }
  // table[guess][truth].
  static GainFunction from_table(std::vector<std::vector<Rational>> table) {
    for (const auto& row : table)
      if (row.size() != table.size()) throw ArgumentError("gain table must be square");
    return GainFunction(Kind::kTable, std::move(table));
  }

  Kind kind() const { return kind_; }
  std::size_t size() const { return table_.size(); }
  Rational operator()(std::size_t guess, std::size_t truth) const {
    if (kind_ == Kind::kBinary) return guess == truth ? 1 : 0;
    return table_[guess][truth];
  }

 private:
  GainFunction(Kind kind, std::vector<std::vector<Rational>> table)
      : kind_(kind), table_(std::move(table)) {}
  Kind kind_;
  std::vector<std::vector<Rational>> table_;
};

// Either an explicit map output -> guessed answer, or the Bayes-optimal guess.
struct GuessStrategy {
  std::optional<std::vector<std::size_t>> map;

  static GuessStrategy optimal() { return {}; }
  static GuessStrategy fixed(std::vector<std::size_t> m) { return {std::move(m)}; }
  bool is_optimal() const { return !map.has_value(); }
};

struct MechanismBundle {
  Graph graph;
  ChannelMatrix matrix;
  PrivacyParameter pp;
  // Normalization: matrix(i, j) = c * r^d(i, j).
  Rational c;
};

namespace detail {

inline DistanceProfile require_symmetric_profile(const Graph& g) {
  if (g.vertex_count() == 0) throw ArgumentError("empty graph");
  if (!g.connected()) throw PreconditionError("graph is disconnected");
  const DistanceProfile first = distance_profile(g, 0);
  for (Vertex v = 1; v < g.vertex_count(); ++v) {
    const DistanceProfile other = distance_profile(g, v);
    if (!(other == first)) {
      auto render = [](const DistanceProfile& p) {
        std::string s = "(";
        for (std::size_t d = 0; d < p.counts.size(); ++d)
          s += (d ? "," : "") + std::to_string(p.counts[d]);
        return s + ")";
      };
      throw PreconditionError("distance profile depends on the base vertex: vertex 0 has " +
                              render(first) + ", vertex " + std::to_string(v) + " has " +
                              render(other) +
                              "; a single normalization constant would not give a channel");
    }
  }
  return first;
}

}  // namespace detail

inline MechanismBundle optimal_mechanism(const Graph& g, const PrivacyParameter& pp) {
  const DistanceProfile profile = detail::require_symmetric_profile(g);
  const Rational c = 1 / profile_core(profile.counts, pp.ratio());
  const std::size_t n = g.vertex_count();
  std::vector<Rational> level(profile.counts.size());
  level[0] = c;
  for (std::size_t d = 1; d < level.size(); ++d) level[d] = level[d - 1] * pp.ratio();
  std::vector<Rational> entries(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      entries[i * n + j] = level[static_cast<std::size_t>(g.distance(i, j))];
  ChannelMatrix matrix(n, n, std::move(entries), g.labels(), g.labels());
  return MechanismBundle{g, std::move(matrix), pp, c};
}

// The same construction read as a channel from the input graph; its posterior
// min-entropy under the uniform prior equals posterior_entropy_bound.
inline ChannelMatrix tight_leakage_matrix(const Graph& g, const PrivacyParameter& pp) {
  return optimal_mechanism(g, pp).matrix;
}

// Expected gain sum_{y,z} p(y) M[y][z] gain(guess(z), y). Rows of M index the
// true answers y, columns the reported outputs z.
inline Rational utility(const Prior& p, const ChannelMatrix& m, const GainFunction& gain,
                        const GuessStrategy& guess) {
  detail::require_prior_matches(p, m);
  const std::size_t answers = m.rows();
  if (gain.kind() == GainFunction::Kind::kTable && gain.size() != answers)
    throw ArgumentError("gain table size does not match the answer count");
  if (guess.is_optimal() && gain.kind() == GainFunction::Kind::kBinary)
    return posterior_success(p, m);

  if (guess.map) {
    if (guess.map->size() != m.cols())
      throw ArgumentError("guess map covers " + std::to_string(guess.map->size()) + " of " +
                          std::to_string(m.cols()) + " outputs");
    for (std::size_t y : *guess.map)
      if (y >= answers) throw ArgumentError("guess map names an unknown answer");
  }
  Rational total = 0;
  for (std::size_t z = 0; z < m.cols(); ++z) {
    auto expected_gain = [&](std::size_t guessed) {
      Rational acc = 0;
      for (std::size_t y = 0; y < answers; ++y)
        if (m(y, z) != 0) acc += p[y] * m(y, z) * gain(guessed, y);
      return acc;
    };
    if (guess.map) {
      total += expected_gain((*guess.map)[z]);
    } else {
      Rational best = expected_gain(0);
      for (std::size_t y = 1; y < answers; ++y) {
        Rational candidate = expected_gain(y);
        if (candidate > best) best = std::move(candidate);
      }
      total += best;
    }
  }
  return total;
}

struct ObliviousComposition {
  // K[x][z] = H[f(x)][z].
  ChannelMatrix matrix;
  // y ~ y' iff some adjacent x, x' have f(x) = y, f(x') = y' and y != y'.
  Graph answer_graph;
};

inline ObliviousComposition compose_oblivious(const Graph& input_graph,
                                              const std::vector<std::size_t>& f_map,
                                              const MechanismBundle& h) {
  const std::size_t inputs = input_graph.vertex_count();
  const std::size_t answers = h.matrix.rows();
  if (f_map.size() != inputs)
    throw ArgumentError("query map covers " + std::to_string(f_map.size()) + " of " +
                        std::to_string(inputs) + " inputs");
  for (std::size_t y : f_map)
    if (y >= answers)
      throw ArgumentError("query answer " + std::to_string(y) + " is not a row of the mechanism");

  const std::size_t cols = h.matrix.cols();
  std::vector<Rational> entries;
  entries.reserve(inputs * cols);
  for (std::size_t x = 0; x < inputs; ++x)
    for (std::size_t z = 0; z < cols; ++z) entries.push_back(h.matrix(f_map[x], z));

  std::vector<Edge> induced;
  for (auto [a, b] : input_graph.edges()) {
    const std::size_t ya = f_map[a], yb = f_map[b];
    if (ya != yb) induced.emplace_back(std::min(ya, yb), std::max(ya, yb));
  }
  std::sort(induced.begin(), induced.end());
  induced.erase(std::unique(induced.begin(), induced.end()), induced.end());

  std::vector<std::string> row_labels;
  if (!input_graph.labels().empty()) row_labels = input_graph.labels();
  return ObliviousComposition{
      ChannelMatrix(inputs, cols, std::move(entries), std::move(row_labels),
                    h.matrix.col_labels()),
      Graph(answers, std::move(induced), h.matrix.row_labels())};
}

// ---------------------------------------------------------------------------
// Fixtures: the city example with answers A..F.

inline std::vector<std::string> city_labels() { return {"A", "B", "C", "D", "E", "F"}; }

// Truncated-geometric style mechanism, entries rounded to three decimals.
inline ChannelMatrix fixture_m1() {
  static constexpr const char* kRows[6][6] = {
      {"0.535", "0.060", "0.052", "0.046", "0.040", "0.267"},
      {"0.465", "0.069", "0.060", "0.053", "0.046", "0.307"},
      {"0.405", "0.060", "0.069", "0.060", "0.053", "0.353"},
      {"0.353", "0.053", "0.060", "0.069", "0.060", "0.405"},
      {"0.307", "0.046", "0.053", "0.060", "0.069", "0.465"},
      {"0.267", "0.040", "0.046", "0.052", "0.060", "0.535"},
  };
  std::vector<Rational> entries;
  for (const auto& row : kRows)
    for (const char* cell : row) entries.push_back(parse_rational(cell));
  return ChannelMatrix(6, 6, std::move(entries), city_labels(), city_labels(),
                       Rational(1, 1000));
}

// The optimal mechanism on the 6-clique at r = 1/2: 2/7 on the diagonal, 1/7
// elsewhere.
inline ChannelMatrix fixture_m2() {
  const Graph answers = build_clique(6).with_labels(city_labels());
  return optimal_mechanism(answers, PrivacyParameter::from_ratio(Rational(1, 2))).matrix;
}

// The non-uniform prior used with the city example.
inline Prior city_skewed_prior() {
  return Prior({Rational(1, 10), Rational(1, 5), Rational(1, 5), Rational(1, 5), Rational(1, 5),
                Rational(1, 10)});
}

}  // namespace dpleak
