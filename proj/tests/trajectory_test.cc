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


#include <functional>
#include <random>

#include "agents/synthetic.h"
#include "core/errors.h"
#include "gtest/gtest.h"
#include "trajectory/trajectory.h"

namespace divskill::trajectory {
namespace {

using A = Action;

// Plain recursive Levenshtein, exponential but fine for short inputs.
size_t NaiveDistance(const std::vector<A>& a, size_t i, const std::vector<A>& b, size_t j) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  return std::min({NaiveDistance(a, i + 1, b, j) + 1, NaiveDistance(a, i, b, j + 1) + 1,
                   NaiveDistance(a, i + 1, b, j + 1) + (a[i] == b[j] ? 0 : 1)});
}

ToolEvent Call(std::string tool, std::string sql = "", bool error = false) {
  return {ToolEvent::Kind::kToolCall, std::move(tool), std::move(sql), error};
}

TEST(ExtractTest, SubmitOnly) {
  const std::vector<ToolEvent> log = {Call("submit_final_sql", "SELECT 1")};
  EXPECT_EQ(ExtractActions(log)->actions, (std::vector<A>{A::kSubmit}));
}

TEST(ExtractTest, GoldenTranscript) {
  const std::vector<ToolEvent> log = {
      Call("execute_sql", "SELECT name, sql FROM sqlite_master"),
      {ToolEvent::Kind::kDraft, "", "SELECT regoin FROM customers", false},
      Call("execute_sql", "SELECT regoin FROM customers", true),
      Call("execute_sql", "SELECT region FROM customers"),
      Call("submit_final_sql", "SELECT region FROM customers")};
  EXPECT_EQ(ExtractActions(log)->actions,
            (std::vector<A>{A::kInspectSchema, A::kDraftSql, A::kExecute, A::kRepair,
                            A::kSubmit}));
}

TEST(ExtractTest, PreservesLengthAndOrder) {
  std::vector<ToolEvent> log;
  const char* tools[] = {"lookup_docs", "review_sql", "get_sql_pattern"};
  for (int i = 0; i < 21; ++i) log.push_back(Call(tools[i % 3]));
  auto t = ExtractActions(log);
  ASSERT_EQ(t->actions.size(), 21u);
  EXPECT_EQ(t->actions[0], A::kLookupDocs);
  EXPECT_EQ(t->actions[1], A::kReview);
  EXPECT_EQ(t->actions[20], A::kGetPattern);
}

TEST(ExtractTest, UnknownToolRejected) {
  const std::vector<ToolEvent> log = {Call("shell")};
  EXPECT_EQ(KindOf(ExtractActions(log).status()), ErrorKind::kUnknownTool);
}

TEST(ExtractTest, RowProbeIsSampling) {
  const std::vector<ToolEvent> log = {Call("execute_sql", "SELECT * FROM orders LIMIT 5")};
  EXPECT_EQ(ExtractActions(log)->actions, (std::vector<A>{A::kSampleRows}));
}

TEST(SimilarityTest, Examples) {
  const std::vector<A> x = {A::kInspectSchema, A::kDraftSql, A::kExecute};
  const std::vector<A> y = {A::kInspectSchema, A::kDraftSql, A::kRepair};
  EXPECT_DOUBLE_EQ(NormalizedSimilarity(x, x), 1.0);
  EXPECT_NEAR(NormalizedSimilarity(x, y), 0.6667, 1e-4);
  EXPECT_DOUBLE_EQ(NormalizedSimilarity(std::vector<A>{}, std::vector<A>{A::kSubmit, A::kSubmit}),
                   0.0);
  EXPECT_DOUBLE_EQ(NormalizedSimilarity(std::vector<A>{}, std::vector<A>{}), 1.0);
}

TEST(SimilarityTest, DpMatchesNaiveOnShortSequences) {
  // Every pair of sequences of length <= 4 over 3 symbols; the acceptance
  // binary covers length 6 over 4 symbols.
  std::vector<std::vector<A>> all = {{}};
  for (size_t len = 1; len <= 4; ++len) {
    const size_t before = all.size();
    for (size_t i = 0; i < before; ++i) {
      if (all[i].size() != len - 1) continue;
      for (int s = 0; s < 3; ++s) {
        auto next = all[i];
        next.push_back(static_cast<A>(s));
        all.push_back(next);
      }
    }
  }
  for (const auto& a : all) {
    for (const auto& b : all) {
      ASSERT_EQ(EditDistance(a, b), NaiveDistance(a, 0, b, 0));
    }
  }
}

TEST(SimilarityTest, SymmetricBoundedAndTriangle) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> sym(0, kNumActions - 1), len(0, 12);
  auto random_seq = [&] {
    std::vector<A> v(len(rng));
    for (A& a : v) a = static_cast<A>(sym(rng));
    return v;
  };
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_seq(), b = random_seq(), c = random_seq();
    const double s = NormalizedSimilarity(a, b);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_DOUBLE_EQ(s, NormalizedSimilarity(b, a));
    EXPECT_DOUBLE_EQ(NormalizedSimilarity(a, a), 1.0);
    EXPECT_LE(EditDistance(a, c), EditDistance(a, b) + EditDistance(b, c));
  }
}

TEST(SimilarityMatrixTest, IdenticalPair) {
  const std::vector<Trajectory> t = {{"s1", "x", {A::kSubmit}}, {"s2", "x", {A::kSubmit}}};
  auto r = SimilarityMatrix(t);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r->per_instance.size(), 1u);
  EXPECT_EQ(r->per_instance[0].matrix, (std::vector<std::vector<double>>{{1, 1}, {1, 1}}));
}

TEST(SimilarityMatrixTest, TooFew) {
  const std::vector<Trajectory> t = {{"s1", "x", {A::kSubmit}}};
  EXPECT_EQ(KindOf(SimilarityMatrix(t).status()), ErrorKind::kTooFew);
}

TEST(SimilarityMatrixTest, SymmetricUnitDiagonal) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> sym(0, kNumActions - 1), len(1, 8);
  std::vector<Trajectory> t;
  for (int x = 0; x < 5; ++x) {
    for (int s = 0; s < 4; ++s) {
      Trajectory tr{"s" + std::to_string(s), "x" + std::to_string(x), {}};
      for (int i = len(rng); i > 0; --i) tr.actions.push_back(static_cast<A>(sym(rng)));
      t.push_back(tr);
    }
  }
  auto r = SimilarityMatrix(t);
  ASSERT_TRUE(r.ok());
  for (const auto& inst : r->per_instance) {
    for (size_t i = 0; i < inst.matrix.size(); ++i) {
      EXPECT_DOUBLE_EQ(inst.matrix[i][i], 1.0);
      for (size_t j = 0; j < inst.matrix.size(); ++j) {
        EXPECT_DOUBLE_EQ(inst.matrix[i][j], inst.matrix[j][i]);
      }
    }
  }
  int total = 0;
  for (int c : r->histogram) total += c;
  EXPECT_EQ(total, 5 * 6);
}

// Distinct capability sets produce distinct deterministic sequences; repeated
// runs of one skill do not.
TEST(SimilarityMatrixTest, DiverseSkillsBelowRepeatedRuns) {
  std::vector<Trajectory> diverse, repeated;
  for (int x = 0; x < 6; ++x) {
    Instance inst{"x" + std::to_string(x), "req:" + std::string(1, 'a' + x % 3), ":memory:",
                  {"SELECT 1", std::nullopt}, Dialect::kSqlite};
    for (int s = 0; s < 3; ++s) {
      std::mt19937_64 rng(s);
      const Skill skill{"skill-" + std::to_string(s), "cap:" + std::string(1, 'a' + s)};
      diverse.push_back(agents::SimulatedExecute(skill, inst, 0.0, rng).trajectory);
      const Skill base{"run-" + std::to_string(s), "cap:a"};
      repeated.push_back(agents::SimulatedExecute(base, inst, 0.0, rng).trajectory);
    }
  }
  auto d = SimilarityMatrix(diverse);
  auto r = SimilarityMatrix(repeated);
  ASSERT_TRUE(d.ok());
  ASSERT_TRUE(r.ok());
  EXPECT_LT(d->mean_off_diagonal, r->mean_off_diagonal);
  EXPECT_DOUBLE_EQ(r->mean_off_diagonal, 1.0);
}

TEST(TrajectoryJsonTest, RoundTrip) {
  const Trajectory t{"s", "x", {A::kInspectSchema, A::kSubmit}};
  EXPECT_EQ(*TrajectoryFromJson(TrajectoryToJson(t)), t);
  for (int i = 0; i < kNumActions; ++i) {
    EXPECT_EQ(*ParseAction(ActionName(static_cast<A>(i))), static_cast<A>(i));
  }
}

}  // namespace
}  // namespace divskill::trajectory
