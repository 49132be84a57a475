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

// Channel matrices over exact rationals: stochastic validation, differential
// privacy audits against an adjacency graph, and min-entropy quantities.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpleak/errors.hpp"
#include "dpleak/graph.hpp"
#include "dpleak/rational.hpp"

namespace dpleak {

// The privacy level as the exact ratio r = e^-epsilon in (0, 1].
class PrivacyParameter {
 public:
  static PrivacyParameter from_ratio(Rational r) {
    if (r <= 0 || r > 1)
      throw ArgumentError("privacy ratio must lie in (0, 1], got " + to_string(r));
    return PrivacyParameter(std::move(r));
  }
  // The double e^-epsilon is converted to a rational exactly, so the result
  // is only as exact as the floating-point exponential.
  static PrivacyParameter from_epsilon(double epsilon) {
    if (!(epsilon >= 0) || std::isinf(epsilon))
      throw ArgumentError("epsilon must be finite and non-negative");
    if (epsilon == 0) return PrivacyParameter(Rational(1));
    const double r = std::exp(-epsilon);
    if (r <= 0) throw ArgumentError("epsilon too large: e^-epsilon underflows");
    return PrivacyParameter(Rational(r));
  }

  const Rational& ratio() const { return ratio_; }
  // e^epsilon = 1/r.
  Rational inverse_ratio() const { return 1 / ratio_; }
  double epsilon() const { return -std::log(to_double(ratio_)); }

 private:
  explicit PrivacyParameter(Rational r) : ratio_(std::move(r)) {}
  Rational ratio_;
};

class Prior {
 public:
  explicit Prior(std::vector<Rational> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw ArgumentError("prior over an empty set");
    Rational total = 0;
    for (const auto& p : probs_) {
      if (p < 0) throw ArgumentError("negative prior probability " + to_string(p));
      total += p;
    }
    if (total != 1) throw ArgumentError("prior sums to " + to_string(total) + ", not 1");
  }
  static Prior uniform(std::size_t n) {
    if (n == 0) throw ArgumentError("uniform prior over an empty set");
    return Prior(std::vector<Rational>(n, Rational(1, n)));
  }

  std::size_t size() const { return probs_.size(); }
  const Rational& operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<Rational>& probs() const { return probs_; }
  bool is_uniform() const {
    for (const auto& p : probs_)
      if (p != probs_.front()) return false;
    return true;
  }

 private:
  std::vector<Rational> probs_;
};

// Row-stochastic matrix of p(output | input), row-major.
class ChannelMatrix {
 public:
  ChannelMatrix() = default;

  // Rows must sum to exactly 1 unless a positive row_sum_tolerance is given
  // (used for fixtures transcribed from rounded tables).
  ChannelMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries,
                std::vector<std::string> row_labels = {},
                std::vector<std::string> col_labels = {},
                const Rational& row_sum_tolerance = 0)
      : rows_(rows),
        cols_(cols),
        entries_(std::move(entries)),
        row_labels_(std::move(row_labels)),
        col_labels_(std::move(col_labels)) {
    if (rows_ == 0 || cols_ == 0) throw ArgumentError("channel matrix must be non-empty");
    if (entries_.size() != rows_ * cols_)
      throw ArgumentError("channel matrix has " + std::to_string(entries_.size()) +
                          " entries, expected " + std::to_string(rows_ * cols_));
    if (!row_labels_.empty() && row_labels_.size() != rows_)
      throw ArgumentError("row label count does not match row count");
    if (!col_labels_.empty() && col_labels_.size() != cols_)
      throw ArgumentError("column label count does not match column count");
    for (std::size_t i = 0; i < rows_; ++i) {
      Rational total = 0;
      for (std::size_t j = 0; j < cols_; ++j) {
        const auto& e = (*this)(i, j);
        if (e < 0) throw ArgumentError("negative channel entry at row " + std::to_string(i));
        total += e;
      }
      const Rational gap = total > 1 ? Rational(total - 1) : Rational(1 - total);
      if (gap > row_sum_tolerance)
        throw ArgumentError("row " + std::to_string(i) + " sums to " + to_string(total));
    }
  }

  static ChannelMatrix from_rows(const std::vector<std::vector<Rational>>& rows,
                                 std::vector<std::string> row_labels = {},
                                 std::vector<std::string> col_labels = {}) {
    if (rows.empty()) throw ArgumentError("channel matrix must be non-empty");
    std::vector<Rational> flat;
    for (const auto& row : rows) {
      if (row.size() != rows.front().size()) throw ArgumentError("ragged channel matrix");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return ChannelMatrix(rows.size(), rows.front().size(), std::move(flat),
                         std::move(row_labels), std::move(col_labels));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  const std::vector<Rational>& entries() const { return entries_; }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }
  std::string row_label(std::size_t i) const {
    return row_labels_.empty() ? std::to_string(i) : row_labels_[i];
  }
  std::string col_label(std::size_t j) const {
    return col_labels_.empty() ? std::to_string(j) : col_labels_[j];
  }

  ChannelMatrix permute_columns(const std::vector<std::size_t>& order) const {
    if (order.size() != cols_) throw ArgumentError("column permutation has wrong length");
    std::vector<Rational> out(entries_.size());
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (order[j] >= cols_) throw ArgumentError("column permutation out of range");
      for (std::size_t i = 0; i < rows_; ++i) out[i * cols_ + j] = (*this)(i, order[j]);
      if (!col_labels_.empty()) labels.push_back(col_labels_[order[j]]);
    }
    return ChannelMatrix(rows_, cols_, std::move(out), row_labels_, std::move(labels));
  }

  friend bool operator==(const ChannelMatrix& a, const ChannelMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> entries_;
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
};

// ---------------------------------------------------------------------------
// Differential privacy audits.

struct Witness {
  std::size_t row = 0;
  std::size_t other_row = 0;
  std::size_t col = 0;
};

struct DpAudit {
  // Largest M[i][j] / M[h][j] over adjacent i, h; nullopt means infinite
  // (a positive entry next to a zero). 0/0 counts as 1.
  std::optional<Rational> max_ratio = Rational(1);
  // ln(max_ratio), +inf when max_ratio is infinite.
  double eps_star = 0.0;
  // Where max_ratio is attained; absent when no pair exceeds ratio 1.
  std::optional<Witness> worst_witness;

  bool infinite() const { return !max_ratio.has_value(); }
  // eps_star <= epsilon + tolerance.
  bool is_dp(const PrivacyParameter& pp, double tolerance = 1e-9) const {
    return eps_star <= pp.epsilon() + tolerance;
  }
  // Exact check: every adjacent ratio is at most 1/r.
  bool is_dp_exact(const PrivacyParameter& pp) const {
    return max_ratio.has_value() && *max_ratio <= pp.inverse_ratio();
  }
};

namespace detail {

inline void require_rows_match(const ChannelMatrix& m, const Graph& g) {
  if (m.rows() != g.vertex_count())
    throw ArgumentError("matrix has " + std::to_string(m.rows()) + " rows but the graph has " +
                        std::to_string(g.vertex_count()) + " vertices");
}

inline void require_prior_matches(const Prior& p, const ChannelMatrix& m) {
  if (p.size() != m.rows())
    throw ArgumentError("prior has " + std::to_string(p.size()) + " entries but the matrix has " +
                        std::to_string(m.rows()) + " rows");
}

}  // namespace detail

inline DpAudit dp_audit(const ChannelMatrix& m, const Graph& g) {
  detail::require_rows_match(m, g);
  DpAudit audit;
  for (auto [a, b] : g.edges()) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Rational& x = m(a, j);
      const Rational& y = m(b, j);
      if (x == y) continue;
      const bool a_high = x > y;
      const Rational& hi = a_high ? x : y;
      const Rational& lo = a_high ? y : x;
      const Witness w{a_high ? a : b, a_high ? b : a, j};
      if (lo == 0) {
        audit.max_ratio.reset();
        audit.eps_star = std::numeric_limits<double>::infinity();
        audit.worst_witness = w;
        return audit;
      }
      const Rational ratio = hi / lo;
      if (ratio > *audit.max_ratio) {
        audit.max_ratio = ratio;
        audit.worst_witness = w;
      }
    }
  }
  audit.eps_star = std::log(to_double(*audit.max_ratio));
  return audit;
}

struct DistanceRatioAudit {
  bool passes = true;
  // Largest M[i][j] * r^d(i,h) / M[h][j]; passes iff it is at most 1.
  // nullopt means a positive entry faces a zero at finite distance.
  std::optional<Rational> worst_excess = Rational(0);
  std::optional<Witness> worst_witness;
};

// Checks M[i][j] <= M[h][j] * r^-d(i,h) for every pair of rows at finite
// distance and every column.
inline DistanceRatioAudit distance_ratio_audit(const ChannelMatrix& m, const Graph& g,
                                               const PrivacyParameter& pp) {
  detail::require_rows_match(m, g);
  const auto& dm = g.distances();
  std::vector<Rational> r_pow(static_cast<std::size_t>(dm.diameter()) + 1);
  r_pow[0] = 1;
  for (std::size_t d = 1; d < r_pow.size(); ++d) r_pow[d] = r_pow[d - 1] * pp.ratio();
  DistanceRatioAudit audit;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t h = 0; h < m.rows(); ++h) {
      if (i == h || dm(i, h) == DistanceMatrix::kUnreachable) continue;
      const Rational& scale = r_pow[static_cast<std::size_t>(dm(i, h))];
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (m(i, j) == 0) continue;
        if (m(h, j) == 0) {
          audit.passes = false;
          audit.worst_excess.reset();
          audit.worst_witness = Witness{i, h, j};
          return audit;
        }
        const Rational excess = m(i, j) * scale / m(h, j);
        if (excess > *audit.worst_excess) {
          audit.worst_excess = excess;
          audit.worst_witness = Witness{i, h, j};
        }
      }
    }
  }
  audit.passes = *audit.worst_excess <= 1;
  return audit;
}

// ---------------------------------------------------------------------------
// Min-entropy quantities. Exact success probabilities; bits only at the end.

inline Rational max_probability(const Prior& p) {
  Rational best = 0;
  for (const auto& x : p.probs()) best = x > best ? x : best;
  return best;
}

inline double min_entropy(const Prior& p) { return -log2(max_probability(p)); }

// Expected success of the best one-try guess after seeing the output:
// sum_j max_i p_i M[i][j].
inline Rational posterior_success(const Prior& p, const ChannelMatrix& m) {
  detail::require_prior_matches(p, m);
  Rational total = 0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Rational best = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      Rational joint = p[i] * m(i, j);
      if (joint > best) best = std::move(joint);
    }
    total += best;
  }
  return total;
}

inline double posterior_min_entropy(const Prior& p, const ChannelMatrix& m) {
  return -log2(posterior_success(p, m));
}

// Prior minus posterior min-entropy, computed as log2(success / max prior) so
// that exact independence gives exactly 0.
inline double leakage(const Prior& p, const ChannelMatrix& m) {
  return log2(posterior_success(p, m) / max_probability(p));
}

// sum_j max_i M[i][j]; the min-capacity is log2 of this.
inline Rational column_max_sum(const ChannelMatrix& m) {
  Rational total = 0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Rational best = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (m(i, j) > best) best = m(i, j);
    total += best;
  }
  return total;
}

inline double min_capacity(const ChannelMatrix& m) { return log2(column_max_sum(m)); }

}  // namespace dpleak
