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

// Closed-form bounds for epsilon-DP channels over symmetric adjacency graphs.
//
// Everything hangs off the core sum S = sum_d n_d r^d, where n_d counts the
// vertices at distance d from any fixed vertex and r = e^-epsilon. Under the
// uniform prior an epsilon-DP channel has success probability at most 1/S.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dpleak/channel.hpp"
#include "dpleak/errors.hpp"
#include "dpleak/graph.hpp"
#include "dpleak/rational.hpp"

namespace dpleak {

enum class BoundKind { kPosteriorEntropy, kLeakage, kIndividualLeakage, kUtility };

inline const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::kPosteriorEntropy: return "posterior_entropy";
    case BoundKind::kLeakage: return "leakage";
    case BoundKind::kIndividualLeakage: return "individual_leakage";
    case BoundKind::kUtility: return "utility";
  }
  return "unknown";
}

struct BoundInputs {
  std::optional<std::vector<std::size_t>> profile;
  Rational ratio = 1;
  std::optional<std::size_t> individuals;
  std::optional<std::size_t> values;
};

struct BoundReport {
  BoundKind kind = BoundKind::kPosteriorEntropy;
  // Bits: the entropy lower bound for posterior_entropy and utility, the
  // leakage upper bound for the two leakage kinds.
  double bits = 0.0;
  // Upper bound on the uniform-prior success probability, 1 / core.
  Rational probability = 1;
  Rational core = 1;
  BoundInputs inputs;
};

// sum_d n_d r^d.
inline Rational profile_core(const std::vector<std::size_t>& counts, const Rational& r) {
  Rational total = 0;
  Rational power = 1;
  for (std::size_t count : counts) {
    total += power * count;
    power *= r;
  }
  return total;
}

inline BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  BigInt result = 1;
  for (std::size_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

// n_d = C(u, d) (v - 1)^d for the database graph with u individuals and v
// values.
inline std::vector<BigInt> hamming_profile_counts(std::size_t individuals, std::size_t values) {
  std::vector<BigInt> counts;
  BigInt power = 1;
  for (std::size_t d = 0; d <= individuals; ++d) {
    counts.push_back(binomial(individuals, d) * power);
    power *= values - 1;
  }
  return counts;
}

inline BoundReport posterior_entropy_bound(const DistanceProfile& profile,
                                           const PrivacyParameter& pp) {
  if (profile.counts.empty() || profile.counts.front() != 1)
    throw ArgumentError("distance profile must start with n_0 = 1");
  BoundReport report;
  report.kind = BoundKind::kPosteriorEntropy;
  report.core = profile_core(profile.counts, pp.ratio());
  report.probability = 1 / report.core;
  report.bits = log2(report.core);
  report.inputs.profile = profile.counts;
  report.inputs.ratio = pp.ratio();
  return report;
}

inline BoundReport utility_bound(const DistanceProfile& profile, const PrivacyParameter& pp) {
  BoundReport report = posterior_entropy_bound(profile, pp);
  report.kind = BoundKind::kUtility;
  return report;
}

namespace detail {
inline void require_hamming_shape(std::size_t individuals, std::size_t values) {
  if (individuals < 1) throw ArgumentError("need at least one individual");
  if (values < 2) throw ArgumentError("need at least two values");
}
}  // namespace detail

// u log2(v / ((v-1) r + 1)).
inline BoundReport hamming_leakage_bound(std::size_t individuals, std::size_t values,
                                         const PrivacyParameter& pp) {
  detail::require_hamming_shape(individuals, values);
  const Rational per_individual = Rational(values - 1) * pp.ratio() + 1;
  BoundReport report;
  report.kind = BoundKind::kLeakage;
  report.core = pow(per_individual, static_cast<unsigned>(individuals));
  report.probability = 1 / report.core;
  report.bits = static_cast<double>(individuals) * log2(Rational(values) / per_individual);
  report.inputs.ratio = pp.ratio();
  report.inputs.individuals = individuals;
  report.inputs.values = values;
  return report;
}

// log2(v / ((v-1) r + 1)); the number of individuals plays no role.
inline BoundReport individual_leakage_bound(std::size_t values, const PrivacyParameter& pp) {
  detail::require_hamming_shape(1, values);
  BoundReport report;
  report.kind = BoundKind::kIndividualLeakage;
  report.core = Rational(values - 1) * pp.ratio() + 1;
  report.probability = 1 / report.core;
  report.bits = log2(Rational(values) / report.core);
  report.inputs.profile = std::vector<std::size_t>{1, values - 1};
  report.inputs.ratio = pp.ratio();
  report.inputs.values = values;
  return report;
}

// Exact check of sum_d C(u,d) (v-1)^d r^d == ((v-1) r + 1)^u.
inline bool hamming_identity_check(std::size_t individuals, std::size_t values,
                                   const PrivacyParameter& pp) {
  detail::require_hamming_shape(individuals, values);
  Rational expanded = 0;
  Rational r_power = 1;
  for (const auto& count : hamming_profile_counts(individuals, values)) {
    expanded += Rational(count) * r_power;
    r_power *= pp.ratio();
  }
  const Rational closed =
      pow(Rational(values - 1) * pp.ratio() + 1, static_cast<unsigned>(individuals));
  return expanded == closed;
}

}  // namespace dpleak
