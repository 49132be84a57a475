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

// Independent searches over epsilon-DP channels, used to try to beat the
// synthesized mechanism and to feed property tests:
//
//   grid_search_optimal  exhaustive over a rational grid, n <= 3;
//   hillclimb_utility    seeded local search on an integer lattice;
//   DpMatrixSampler      random exactly-DP matrices of varied shape.
//
// None of these use the closed-form bounds. The first two work on integer
// numerators so every comparison is exact.

#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dpleak/channel.hpp"
#include "dpleak/errors.hpp"
#include "dpleak/graph.hpp"
#include "dpleak/mechanisms.hpp"
#include "dpleak/rational.hpp"

namespace dpleak {

struct SearchReport {
  Rational best_utility = 0;
  ChannelMatrix best_matrix;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string method;
};

namespace detail {

// Bounded draws straight from the engine output, so a seed reproduces the
// same stream on every standard library.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

struct SmallRatio {
  std::int64_t num = 1;
  std::int64_t den = 1;
};

inline SmallRatio small_ratio(const PrivacyParameter& pp) {
  const BigInt num = numerator(pp.ratio()), den = denominator(pp.ratio());
  const BigInt cap = BigInt(1) << 62;
  if (num > cap || den > cap)
    throw ResourceError("privacy ratio " + to_string(pp.ratio()) +
                        " is too fine for the integer search lattice");
  return {num.convert_to<std::int64_t>(), den.convert_to<std::int64_t>()};
}

// a / b <= 1 / r in both directions, i.e. a r <= b and b r <= a.
inline bool within_ratio(std::int64_t a, std::int64_t b, SmallRatio r) {
  using Wide = __int128;
  return Wide(a) * r.num <= Wide(b) * r.den && Wide(b) * r.num <= Wide(a) * r.den;
}

inline ChannelMatrix lattice_matrix(const std::vector<std::int64_t>& cells, std::size_t n,
                                    std::int64_t unit, const Graph& g) {
  std::vector<Rational> entries;
  entries.reserve(cells.size());
  for (std::int64_t cell : cells) entries.emplace_back(BigInt(cell), BigInt(unit));
  return ChannelMatrix(n, n, std::move(entries), g.labels(), g.labels());
}

inline std::int64_t column_max_total(const std::vector<std::int64_t>& cells, std::size_t n) {
  std::int64_t total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::int64_t best = 0;
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, cells[i * n + j]);
    total += best;
  }
  return total;
}

}  // namespace detail

inline constexpr std::size_t kGridMaxVertices = 3;
inline constexpr std::uint64_t kGridMaxMatrices = 100'000'000;

// Enumerates every n x n row-stochastic matrix with entries in {0, step, ..,
// 1}, keeps the epsilon-DP ones, and maximizes uniform-prior binary utility.
// `step` must be 1/q. Ties keep the first matrix in lexicographic order.
inline SearchReport grid_search_optimal(const Graph& g, const PrivacyParameter& pp,
                                        const Rational& step) {
  const std::size_t n = g.vertex_count();
  if (n == 0) throw ArgumentError("empty graph");
  if (n > kGridMaxVertices)
    throw ResourceError("grid search supports at most " + std::to_string(kGridMaxVertices) +
                        " vertices, got " + std::to_string(n));
  if (step <= 0 || step > 1 || numerator(step) != 1)
    throw ArgumentError("grid step must be 1/q for a positive integer q");
  if (denominator(step) > 4096) throw ResourceError("grid step too fine");
  const auto q = denominator(step).convert_to<std::int64_t>();
  const auto ratio = detail::small_ratio(pp);

  // All compositions of q into n non-negative parts.
  std::vector<std::vector<std::int64_t>> rows;
  std::vector<std::int64_t> part(n, 0);
  auto compose = [&](auto&& self, std::size_t pos, std::int64_t left) -> void {
    if (pos + 1 == n) {
      part[pos] = left;
      rows.push_back(part);
      return;
    }
    for (std::int64_t x = 0; x <= left; ++x) {
      part[pos] = x;
      self(self, pos + 1, left - x);
    }
  };
  compose(compose, 0, q);
  std::uint64_t estimate = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (estimate > kGridMaxMatrices / rows.size())
      throw ResourceError("grid search would enumerate more than " +
                          std::to_string(kGridMaxMatrices) + " matrices");
    estimate *= rows.size();
  }

  std::vector<std::size_t> choice(n, 0);
  std::vector<std::int64_t> cells(n * n, 0), best_cells;
  std::int64_t best_total = -1;
  std::uint64_t feasible = 0;
  auto assign = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      ++feasible;
      const std::int64_t total = detail::column_max_total(cells, n);
      if (total > best_total) {
        best_total = total;
        best_cells = cells;
      }
      return;
    }
    for (const auto& row : rows) {
      bool ok = true;
      for (Vertex h : g.neighbors(i)) {
        if (h >= i) continue;
        for (std::size_t j = 0; j < n && ok; ++j)
          ok = detail::within_ratio(row[j], cells[h * n + j], ratio);
        if (!ok) break;
      }
      if (!ok) continue;
      std::copy(row.begin(), row.end(), cells.begin() + static_cast<std::ptrdiff_t>(i * n));
      self(self, i + 1);
    }
  };
  assign(assign, 0);

  SearchReport report;
  report.method = "grid";
  report.trials = feasible;
  report.best_utility = Rational(BigInt(best_total), BigInt(q) * n);
  report.best_matrix = detail::lattice_matrix(best_cells, n, q, g);
  return report;
}

enum class HillclimbStart { kUniform, kSynthesized };

struct HillclimbOptions {
  std::uint64_t iterations = 10'000;
  std::uint64_t seed = 0;
  HillclimbStart start = HillclimbStart::kUniform;
};

// Seeded local search over n x n epsilon-DP matrices on the lattice of
// multiples of 1/unit. A move shifts mass between two cells of one row and is
// kept when the matrix stays DP and uniform-prior utility does not drop.
inline SearchReport hillclimb_utility(const Graph& g, const PrivacyParameter& pp,
                                      const HillclimbOptions& options = {}) {
  const std::size_t n = g.vertex_count();
  if (n == 0) throw ArgumentError("empty graph");
  if (!g.connected()) throw PreconditionError("hill climbing requires a connected graph");
  const auto ratio = detail::small_ratio(pp);

  const ChannelMatrix start = options.start == HillclimbStart::kSynthesized
                                  ? optimal_mechanism(g, pp).matrix
                                  : ChannelMatrix(n, n, std::vector<Rational>(n * n, Rational(1, n)));
  BigInt common = 1;
  for (const auto& e : start.entries()) {
    const BigInt den = denominator(e);
    common = common / boost::multiprecision::gcd(common, den) * den;
  }
  if (common > (BigInt(1) << 40)) throw ResourceError("start matrix denominators too large");
  std::int64_t unit = common.convert_to<std::int64_t>();
  while (unit < (std::int64_t{1} << 40) / 2) unit *= 2;

  std::vector<std::int64_t> cells(n * n);
  for (std::size_t k = 0; k < cells.size(); ++k)
    cells[k] = (start.entries()[k] * unit).convert_to<std::int64_t>();

  auto col_max = [&](std::size_t j) {
    std::int64_t best = 0;
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, cells[i * n + j]);
    return best;
  };
  auto column_ok = [&](std::size_t i, std::size_t j) {
    for (Vertex h : g.neighbors(i))
      if (!detail::within_ratio(cells[i * n + j], cells[h * n + j], ratio)) return false;
    return true;
  };

  detail::SeededRng rng(options.seed);
  std::int64_t current = detail::column_max_total(cells, n);
  std::int64_t best_total = current;
  std::vector<std::int64_t> best_cells = cells;
  for (std::uint64_t it = 0; it < options.iterations && n > 1; ++it) {
    const std::size_t i = rng.below(n);
    const std::size_t from = rng.below(n);
    std::size_t to = rng.below(n - 1);
    if (to >= from) ++to;
    std::int64_t& src = cells[i * n + from];
    std::int64_t& dst = cells[i * n + to];
    if (src == 0) continue;
    const auto shift = static_cast<int>(rng.below(32));
    const std::int64_t delta = std::max<std::int64_t>(1, src >> shift);
    const std::int64_t before = col_max(from) + col_max(to);
    src -= delta;
    dst += delta;
    const bool feasible = column_ok(i, from) && column_ok(i, to);
    const std::int64_t after = feasible ? col_max(from) + col_max(to) : 0;
    if (!feasible || after < before) {
      src += delta;
      dst -= delta;
      continue;
    }
    current += after - before;
    if (current > best_total) {
      best_total = current;
      best_cells = cells;
    }
  }

  SearchReport report;
  report.method = "hillclimb";
  report.trials = options.iterations;
  report.seed = options.seed;
  report.best_utility = Rational(BigInt(best_total), BigInt(unit) * n);
  report.best_matrix = detail::lattice_matrix(best_cells, n, unit, g);
  return report;
}

// Stream of random channel matrices that satisfy epsilon-DP on g exactly.
//
// Each output column starts as random non-negative weights and is closed
// under w_i = max_h w_h r^d(i,h), which caps every adjacent ratio at 1/r. One
// slack column T - S_i then makes the row sums equal (T >= max S / (1 - r)
// keeps that column within ratio too), and dividing by T makes the rows
// stochastic without touching within-column ratios. Columns are shuffled so
// peaks land anywhere. Every emitted matrix is re-audited.
class DpMatrixSampler {
 public:
  DpMatrixSampler(Graph g, PrivacyParameter pp, std::uint64_t seed)
      : graph_(std::move(g)), pp_(std::move(pp)), rng_(seed) {
    if (graph_.vertex_count() == 0) throw ArgumentError("empty graph");
  }

  ChannelMatrix next() {
    while (true) {
      ChannelMatrix m = draw();
      if (dp_audit(m, graph_).is_dp_exact(pp_)) return m;
    }
  }

 private:
  ChannelMatrix draw() {
    const std::size_t n = graph_.vertex_count();
    const auto& dm = graph_.distances();
    const Rational& r = pp_.ratio();
    std::vector<Rational> r_pow(static_cast<std::size_t>(dm.diameter()) + 3);
    r_pow[0] = 1;
    for (std::size_t d = 1; d < r_pow.size(); ++d) r_pow[d] = r_pow[d - 1] * r;

    const std::size_t weight_cols = n + rng_.below(3);
    std::vector<std::vector<Rational>> columns;
    for (std::size_t j = 0; j < weight_cols; ++j) {
      std::vector<Rational> base(n);
      for (std::size_t i = 0; i < n; ++i) {
        // Sparse peaks give more varied argmax patterns.
        if (rng_.below(3) != 0) continue;
        base[i] = Rational(rng_.below(10)) * r_pow[rng_.below(3)];
      }
      if (j == 0) base[rng_.below(n)] += 1;
      std::vector<Rational> closed(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t h = 0; h < n; ++h) {
          if (base[h] == 0 || dm(i, h) == DistanceMatrix::kUnreachable) continue;
          Rational v = base[h] * r_pow[static_cast<std::size_t>(dm(i, h))];
          if (v > closed[i]) closed[i] = std::move(v);
        }
      columns.push_back(std::move(closed));
    }

    std::vector<Rational> row_sum(n);
    Rational max_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& col : columns) row_sum[i] += col[i];
      if (row_sum[i] > max_sum) max_sum = row_sum[i];
    }
    Rational total = r == 1 ? max_sum : Rational(max_sum / (1 - r));
    total += max_sum * Rational(rng_.below(5), 4);
    std::vector<Rational> slack(n);
    for (std::size_t i = 0; i < n; ++i) slack[i] = total - row_sum[i];
    columns.push_back(std::move(slack));

    // Fisher-Yates with the seeded generator.
    for (std::size_t j = columns.size(); j > 1; --j) std::swap(columns[j - 1], columns[rng_.below(j)]);

    const std::size_t cols = columns.size();
    std::vector<Rational> entries(n * cols);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < cols; ++j) entries[i * cols + j] = columns[j][i] / total;
    return ChannelMatrix(n, cols, std::move(entries), graph_.labels());
  }

  Graph graph_;
  PrivacyParameter pp_;
  detail::SeededRng rng_;
};

inline std::vector<ChannelMatrix> random_dp_sample(const Graph& g, const PrivacyParameter& pp,
                                                   std::size_t count, std::uint64_t seed) {
  DpMatrixSampler sampler(g, pp, seed);
  std::vector<ChannelMatrix> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(sampler.next());
  return out;
}

}  // namespace dpleak
