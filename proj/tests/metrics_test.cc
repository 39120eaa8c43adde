// Copyright 2026 The DivSkill Authors.
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


#include <random>

#include "core/errors.h"
#include "core/outcome_matrix.h"
#include "gtest/gtest.h"
#include "metrics/metrics.h"

namespace divskill::metrics {
namespace {

// Enumerates every size-k subset of K candidates with f failures.
Rational EnumeratedPassAtK(size_t K, size_t f, size_t k) {
  int64_t hit = 0, total = 0;
  for (uint32_t mask = 0; mask < (1u << K); ++mask) {
    if (static_cast<size_t>(__builtin_popcount(mask)) != k) continue;
    ++total;
    bool any = false;
    for (size_t i = 0; i < K; ++i) {
      if ((mask >> i & 1u) && i >= f) any = true;  // candidates [f, K) succeed
    }
    if (any) ++hit;
  }
  return Rational(hit, total);
}

TEST(PassAtKTest, FrozenExample) {
  auto r = PassAtKExact(8, 6, 2);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r, Rational(13, 28));
  std::vector<bool> s(8, false);
  s[0] = s[1] = true;
  EXPECT_NEAR(*PassAtK(s, 2), 13.0 / 28.0, 1e-12);
}

TEST(PassAtKTest, AllFailIsZero) {
  for (size_t k = 1; k <= 5; ++k) EXPECT_EQ(*PassAtKExact(5, 5, k), Rational(0));
}

TEST(PassAtKTest, FullKIsAnySuccess) {
  EXPECT_EQ(*PassAtKExact(4, 3, 4), Rational(1));
  EXPECT_EQ(*PassAtKExact(4, 4, 4), Rational(0));
}

TEST(PassAtKTest, BadK) {
  EXPECT_EQ(KindOf(PassAtKExact(4, 1, 0).status()), ErrorKind::kBadK);
  EXPECT_EQ(KindOf(PassAtKExact(4, 1, 5).status()), ErrorKind::kBadK);
  EXPECT_EQ(KindOf(PassAtK({true}, 2).status()), ErrorKind::kBadK);
}

TEST(PassAtKTest, ClosedFormMatchesEnumeration) {
  for (size_t K = 1; K <= 8; ++K) {
    for (size_t f = 0; f <= K; ++f) {
      for (size_t k = 1; k <= K; ++k) {
        EXPECT_EQ(*PassAtKExact(K, f, k), EnumeratedPassAtK(K, f, k))
            << "K=" << K << " f=" << f << " k=" << k;
      }
    }
  }
}

TEST(PassAtKTest, NonDecreasingInK) {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<bool> s(20);
    for (size_t i = 0; i < s.size(); ++i) s[i] = coin(rng);
    double prev = 0.0;
    for (size_t k = 1; k <= s.size(); ++k) {
      const double v = *PassAtK(s, k);
      EXPECT_GE(v + 1e-12, prev);
      prev = v;
    }
  }
}

TEST(EmpiricalRateTest, HalfOfResidual) {
  OutcomeMatrix m;
  m.RegisterSkill("s");
  ResidualSet r;
  for (int i = 0; i < 4; ++i) {
    const std::string x = "x" + std::to_string(i);
    r.instance_ids.insert(x);
    m.RegisterInstance(x);
    ASSERT_TRUE(m.Append("s", x, {i < 2, std::nullopt, std::nullopt, std::nullopt}).ok());
  }
  EXPECT_EQ(*EmpiricalSuccessRate(m, "s", r), Rational(1, 2));
}

TEST(EmpiricalRateTest, AveragesPerInstanceRatios) {
  OutcomeMatrix m;
  ResidualSet r{{"x1", "x2", "x3"}, {}};
  m.RegisterSkill("s");
  for (const auto& x : r.instance_ids) m.RegisterInstance(x);
  auto add = [&](const std::string& x, bool ok) {
    ASSERT_TRUE(m.Append("s", x, {ok, std::nullopt, std::nullopt, std::nullopt}).ok());
  };
  add("x1", true);
  add("x1", false);
  add("x2", true);
  for (int i = 0; i < 3; ++i) add("x3", false);
  EXPECT_EQ(*EmpiricalSuccessRate(m, "s", r), Rational(1, 2));
}

TEST(EmpiricalRateTest, AllUnsolvedIsZero) {
  OutcomeMatrix m;
  m.RegisterSkill("s");
  m.RegisterInstance("x");
  ASSERT_TRUE(m.Append("s", "x", {false, std::nullopt, std::nullopt, std::nullopt}).ok());
  EXPECT_EQ(*EmpiricalSuccessRate(m, "s", {{"x"}, {}}), Rational(0));
}

TEST(SelectedAccuracyTest, TwoOfThree) {
  auto acc = SelectedAccuracy({"a", "b", "c"}, {{"a", "ra"}, {"b", "rb"}, {"c", "rc"}},
                              {{"ra", true}, {"rb", false}, {"rc", true}});
  ASSERT_TRUE(acc.ok());
  EXPECT_NEAR(*acc, 2.0 / 3.0, 1e-12);
}

TEST(SelectedAccuracyTest, MissingSelection) {
  auto acc = SelectedAccuracy({"a", "b"}, {{"a", "ra"}}, {{"ra", true}});
  EXPECT_EQ(KindOf(acc.status()), ErrorKind::kMissingSelection);
}

TEST(SelectedAccuracyTest, ZeroInstancesIsError) {
  EXPECT_FALSE(SelectedAccuracy({}, {}, {}).ok());
}

TEST(PassCurveTest, MeanPass1AndFirstCandidateFlag) {
  std::vector<InstanceCandidates> inst = {{"a", {false, true}}, {"b", {true, true}}};
  auto curve = DatasetPassCurve(inst);
  ASSERT_TRUE(curve.ok());
  EXPECT_NEAR(curve->values.at(1), 0.75, 1e-12);
  EXPECT_NEAR(curve->values.at(2), 1.0, 1e-12);
  EXPECT_TRUE(curve->NonDecreasing());
  auto first = DatasetPassCurve(inst, {.first_candidate_pass1 = true});
  ASSERT_TRUE(first.ok());
  EXPECT_NEAR(first->values.at(1), 0.5, 1e-12);
}

}  // namespace
}  // namespace divskill::metrics
