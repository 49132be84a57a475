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


#include "dpleak/bounds.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dpleak/mechanisms.hpp"
#include "dpleak/oracle.hpp"

namespace dpleak {
namespace {

Rational Q(std::int64_t num, std::int64_t den = 1) { return make_rational(num, den); }
PrivacyParameter R(std::int64_t num, std::int64_t den) {
  return PrivacyParameter::from_ratio(Q(num, den));
}

TEST(ProfileCoreTest, SmallCases) {
  EXPECT_EQ(profile_core({1, 5}, Q(1, 2)), Q(7, 2));
  EXPECT_EQ(profile_core({1, 3, 6}, Q(1, 2)), Q(4));
  EXPECT_EQ(profile_core({1, 2, 2, 1}, Q(1, 2)), Q(21, 8));
  EXPECT_EQ(profile_core({}, Q(1, 2)), Q(0));
}

TEST(BinomialTest, PascalRowsAndOutOfRange) {
  for (std::size_t n = 1; n < 30; ++n)
    for (std::size_t k = 1; k < n; ++k)
      EXPECT_EQ(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
  EXPECT_EQ(binomial(3, 5), 0);
  EXPECT_EQ(binomial(60, 30), BigInt("118264581564861424"));
}

TEST(HammingProfileTest, MatchesBfsProfile) {
  for (std::size_t u = 1; u <= 4; ++u)
    for (std::size_t v = 2; v <= 4; ++v) {
      const auto counts = hamming_profile_counts(u, v);
      const auto profile = distance_profile(build_hamming(u, v), 0);
      ASSERT_EQ(counts.size(), profile.counts.size());
      for (std::size_t d = 0; d < counts.size(); ++d) EXPECT_EQ(counts[d], profile.counts[d]);
    }
}

TEST(PosteriorEntropyBoundTest, KnownValues) {
  const auto clique = posterior_entropy_bound(distance_profile(build_clique(6), 0), R(1, 2));
  EXPECT_EQ(clique.core, Q(7, 2));
  EXPECT_EQ(clique.probability, Q(2, 7));
  EXPECT_NEAR(clique.bits, std::log2(3.5), 1e-12);
  EXPECT_STREQ(to_string(clique.kind), "posterior_entropy");

  const auto petersen = posterior_entropy_bound(distance_profile(build_petersen(), 3), R(1, 2));
  EXPECT_EQ(petersen.core, Q(4));
  EXPECT_DOUBLE_EQ(petersen.bits, 2.0);

  // r = 1 leaves the prior untouched: log2 n bits remain.
  for (std::size_t n : {3u, 5u, 8u}) {
    const auto b = posterior_entropy_bound(distance_profile(build_cycle(n), 0), R(1, 1));
    EXPECT_NEAR(b.bits, std::log2(static_cast<double>(n)), 1e-12);
  }
}

TEST(PosteriorEntropyBoundTest, RejectsMalformedProfile) {
  EXPECT_THROW(posterior_entropy_bound(DistanceProfile{0, {}}, R(1, 2)), ArgumentError);
  EXPECT_THROW(posterior_entropy_bound(DistanceProfile{0, {2, 3}}, R(1, 2)), ArgumentError);
}

TEST(PosteriorEntropyBoundTest, MonotoneInRatio) {
  const auto profile = distance_profile(build_hamming(3, 2), 0);
  double previous = -1;
  for (std::int64_t k = 1; k <= 10; ++k) {
    const double bits = posterior_entropy_bound(profile, R(k, 10)).bits;
    EXPECT_GT(bits, previous);
    previous = bits;
  }
  EXPECT_NEAR(previous, 3.0, 1e-12);
}

TEST(UtilityBoundTest, DualOfEntropyBound) {
  const auto profile = distance_profile(build_cycle(6), 0);
  const auto u = utility_bound(profile, R(1, 2));
  EXPECT_EQ(u.probability, Q(8, 21));
  EXPECT_EQ(u.kind, BoundKind::kUtility);
  EXPECT_EQ(u.core, posterior_entropy_bound(profile, R(1, 2)).core);
}

TEST(HammingLeakageBoundTest, ClosedForm) {
  const auto b = hamming_leakage_bound(2, 2, R(1, 2));
  EXPECT_EQ(b.core, Q(9, 4));
  EXPECT_NEAR(b.bits, 2 * std::log2(4.0 / 3.0), 1e-12);
  EXPECT_STREQ(to_string(b.kind), "leakage");
  EXPECT_NEAR(hamming_leakage_bound(3, 4, R(1, 1)).bits, 0.0, 1e-15);
  EXPECT_THROW(hamming_leakage_bound(0, 2, R(1, 2)), ArgumentError);
  EXPECT_THROW(hamming_leakage_bound(2, 1, R(1, 2)), ArgumentError);
}

TEST(HammingLeakageBoundTest, BruteForceOnSmallDatabases) {
  // Every sampled DP channel on H(2,2) leaks at most the bound, and the tight
  // matrix reaches it exactly (capacity ratio 16/9).
  const Graph g = build_hamming(2, 2);
  const auto pp = R(1, 2);
  const auto bound = hamming_leakage_bound(2, 2, pp);
  const Rational limit = Rational(4) / bound.core;
  for (const auto& m : random_dp_sample(g, pp, 60, 99)) {
    EXPECT_LE(column_max_sum(m), limit);
    EXPECT_LE(min_capacity(m), bound.bits + 1e-12);
  }
  EXPECT_EQ(column_max_sum(tight_leakage_matrix(g, pp)), Q(16, 9));
}

TEST(HammingLeakageBoundTest, EqualsUniformEntropyMinusBound) {
  for (std::size_t u = 1; u <= 5; ++u)
    for (std::size_t v = 2; v <= 4; ++v)
      for (auto pp : {R(1, 1), R(1, 2), R(1, 3), R(2, 5)}) {
        std::vector<std::size_t> counts;
        for (const auto& c : hamming_profile_counts(u, v)) counts.push_back(static_cast<std::size_t>(c));
        const double rhs = static_cast<double>(u) * std::log2(static_cast<double>(v)) -
                           posterior_entropy_bound(DistanceProfile{0, counts}, pp).bits;
        EXPECT_NEAR(hamming_leakage_bound(u, v, pp).bits, rhs, 1e-12);
      }
}

TEST(IndividualLeakageBoundTest, KnownValuesAndIndependence) {
  EXPECT_NEAR(individual_leakage_bound(2, R(1, 2)).bits, std::log2(4.0 / 3.0), 1e-12);
  EXPECT_NEAR(individual_leakage_bound(6, R(1, 2)).bits, std::log2(12.0 / 7.0), 1e-12);
  EXPECT_EQ(individual_leakage_bound(6, R(1, 2)).core, Q(7, 2));
  for (std::size_t u = 1; u <= 4; ++u) {
    const auto total = hamming_leakage_bound(u, 3, R(1, 3));
    EXPECT_NEAR(total.bits / static_cast<double>(u), individual_leakage_bound(3, R(1, 3)).bits,
                1e-12);
  }
  EXPECT_THROW(individual_leakage_bound(1, R(1, 2)), ArgumentError);
}

TEST(HammingIdentityTest, ExactAcrossGrid) {
  EXPECT_EQ(profile_core({1, 3, 3, 1}, Q(1, 2)), Q(27, 8));
  EXPECT_EQ(hamming_leakage_bound(4, 3, R(1, 3)).core, pow(Q(5, 3), 4));
  for (std::size_t u = 1; u <= 5; ++u)
    for (std::size_t v = 2; v <= 4; ++v)
      for (auto pp : {R(1, 1), R(1, 2), R(1, 3), R(2, 5)})
        EXPECT_TRUE(hamming_identity_check(u, v, pp)) << u << "," << v;
  EXPECT_TRUE(hamming_identity_check(40, 7, R(3, 11)));
}

}  // namespace
}  // namespace dpleak
