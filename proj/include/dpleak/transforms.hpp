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

// Rewrites of a DP channel matrix into canonical forms that keep the
// uniform-prior success probability and never worsen the privacy ratio.
//
//   to_diagonal_form:            merge columns by the row holding their
//                                maximum, so column i peaks at row i and
//                                columns n..m-1 vanish.
//   symmetrize_distance_regular: replace each entry by the average over its
//                                distance class.
//   symmetrize_vt_plus:          average over a VT+ automorphism family.
//
// After either symmetrization all diagonal entries are equal and are the
// global maximum, so the uniform-prior success probability is that maximum.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpleak/automorphism.hpp"
#include "dpleak/channel.hpp"
#include "dpleak/errors.hpp"
#include "dpleak/graph.hpp"
#include "dpleak/rational.hpp"

namespace dpleak {

enum class CanonicalStage { kDiagonal, kSymmetric };

inline const char* to_string(CanonicalStage s) {
  return s == CanonicalStage::kDiagonal ? "diagonal" : "symmetric";
}

struct CanonicalForm {
  ChannelMatrix matrix;
  CanonicalStage stage = CanonicalStage::kDiagonal;
  // column_target[j] = column of the diagonal form that absorbed input column j.
  std::vector<std::size_t> column_target;
  // "distance-classes" or "automorphism-family:<method>" once symmetrized.
  std::string symmetry;
};

inline bool is_diagonal_form(const ChannelMatrix& m);

namespace detail {

inline std::vector<std::string> canonical_column_labels(const ChannelMatrix& m) {
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < m.cols(); ++j)
    labels.push_back(j < m.rows() ? m.row_label(j) : "unused" + std::to_string(j - m.rows()));
  return labels;
}

// A symmetric-stage form is also diagonal, so both stages are accepted.
inline void require_diagonal_stage(const CanonicalForm& cf, const Graph& g) {
  require_rows_match(cf.matrix, g);
  if (!is_diagonal_form(cf.matrix))
    throw PreconditionError("symmetrization expects a diagonal-stage form");
}

}  // namespace detail

// True iff column i peaks at row i for i < n and columns n.. are zero.
inline bool is_diagonal_form(const ChannelMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() < n) return false;
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < n; ++i) {
      if (j >= n && m(i, j) != 0) return false;
      if (j < n && m(i, j) > m(j, j)) return false;
    }
  return true;
}

// Diagonal form plus: every diagonal entry equals the global maximum.
inline bool is_symmetric_form(const ChannelMatrix& m) {
  if (!is_diagonal_form(m)) return false;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m(i, i) != m(0, 0)) return false;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) > m(0, 0)) return false;
  }
  return true;
}

// Sums every column into the column indexed by its argmax row (lowest row on
// ties). When `pp` is given the input must satisfy it exactly.
inline CanonicalForm to_diagonal_form(const ChannelMatrix& m, const Graph& g,
                                      const std::optional<PrivacyParameter>& pp = std::nullopt) {
  detail::require_rows_match(m, g);
  const std::size_t n = m.rows(), cols = m.cols();
  if (n > cols)
    throw ArgumentError("diagonal form needs at least as many outputs as inputs (" +
                        std::to_string(n) + " > " + std::to_string(cols) + ")");
  if (pp && !dp_audit(m, g).is_dp_exact(*pp))
    throw PreconditionError("input matrix does not satisfy the declared privacy level");

  CanonicalForm cf;
  cf.column_target.resize(cols);
  std::vector<Rational> out(n * cols);
  for (std::size_t j = 0; j < cols; ++j) {
    std::size_t peak = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (m(i, j) > m(peak, j)) peak = i;
    cf.column_target[j] = peak;
    for (std::size_t i = 0; i < n; ++i) out[i * cols + peak] += m(i, j);
  }
  cf.matrix = ChannelMatrix(n, cols, std::move(out), m.row_labels(),
                            detail::canonical_column_labels(m));
  cf.stage = CanonicalStage::kDiagonal;
  return cf;
}

// Distance-class averaging: entry (i, j) becomes a_d with d = d(i, j) and
// a_d = (sum of entries at distance d) / (n * n_d).
inline CanonicalForm symmetrize_distance_regular(const CanonicalForm& cf, const Graph& g,
                                                 const IntersectionArray& ia) {
  detail::require_diagonal_stage(cf, g);
  const auto actual = is_distance_regular(g);
  if (!actual) throw PreconditionError("graph is not distance-regular");
  if (!(*actual == ia))
    throw PreconditionError("intersection array does not match the graph");

  const ChannelMatrix& src = cf.matrix;
  const std::size_t n = src.rows(), cols = src.cols();
  const auto& dm = g.distances();
  const auto profile = distance_profile(g, 0);
  std::vector<Rational> class_sum(profile.counts.size());
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t l = 0; l < n; ++l) class_sum[static_cast<std::size_t>(dm(h, l))] += src(h, l);
  std::vector<Rational> level(class_sum.size());
  for (std::size_t d = 0; d < level.size(); ++d)
    level[d] = class_sum[d] / Rational(n * profile.counts[d]);

  std::vector<Rational> out(n * cols);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * cols + j] = level[static_cast<std::size_t>(dm(i, j))];

  CanonicalForm result{ChannelMatrix(n, cols, std::move(out), src.row_labels(), src.col_labels()),
                       CanonicalStage::kSymmetric, cf.column_target, "distance-classes"};
  return result;
}

// Automorphism averaging: entry (i, j) becomes (1/n) sum_k M[s_k(i)][s_k(j)].
inline CanonicalForm symmetrize_vt_plus(const CanonicalForm& cf, const Graph& g,
                                        const AutomorphismFamily& fam) {
  detail::require_diagonal_stage(cf, g);
  if (!verify_family(g, fam)) throw PreconditionError("not a VT+ automorphism family");

  const ChannelMatrix& src = cf.matrix;
  const std::size_t n = src.rows(), cols = src.cols();
  std::vector<Rational> out(n * cols);
  const Rational weight(1, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational total = 0;
      for (const auto& sigma : fam.perms) total += src(sigma[i], sigma[j]);
      out[i * cols + j] = total * weight;
    }

  CanonicalForm result{ChannelMatrix(n, cols, std::move(out), src.row_labels(), src.col_labels()),
                       CanonicalStage::kSymmetric, cf.column_target, "automorphism-family"};
  return result;
}

// Picks distance-class averaging when the graph is distance-regular, else a
// VT+ family. Throws PreconditionError when neither applies.
inline CanonicalForm symmetrize(const CanonicalForm& cf, const Graph& g,
                                const SearchBudget& budget = {}) {
  if (auto ia = is_distance_regular(g)) return symmetrize_distance_regular(cf, g, *ia);
  const auto cert = vt_plus_certificate(g, budget);
  if (cert.verdict == VtPlusVerdict::kYes) {
    auto result = symmetrize_vt_plus(cf, g, *cert.family);
    result.symmetry += ":" + cert.method;
    return result;
  }
  throw PreconditionError("graph is neither distance-regular nor VT+ (" + cert.method + ")");
}

struct PipelineResult {
  CanonicalForm diagonal;
  CanonicalForm symmetric;
};

inline PipelineResult canonicalize(const ChannelMatrix& m, const Graph& g,
                                   const std::optional<PrivacyParameter>& pp = std::nullopt,
                                   const SearchBudget& budget = {}) {
  PipelineResult result{to_diagonal_form(m, g, pp), {}};
  result.symmetric = symmetrize(result.diagonal, g, budget);
  return result;
}

}  // namespace dpleak
