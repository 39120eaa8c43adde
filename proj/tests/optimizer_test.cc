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


#include <map>

#include "agents/synthetic.h"
#include "core/errors.h"
#include "exec/manifest.h"
#include "gtest/gtest.h"
#include "metrics/metrics.h"
#include "optimizer/engine.h"
#include "optimizer/skill_optimizer.h"
#include "pipeline/synthetic_family.h"
#include "test_support.h"

namespace divskill::optimizer {
namespace {

using divskill::testing::ScriptedChatClient;
using divskill::testing::TempDir;

class IdentityOptimizer : public SkillOptimizer {
 public:
  absl::StatusOr<std::string> Optimize(const std::string& prompt,
                                       const std::vector<agents::FailureTrace>&) override {
    ++calls;
    return prompt;
  }
  int calls = 0;
};

class FixedOptimizer : public SkillOptimizer {
 public:
  explicit FixedOptimizer(std::string out) : out_(std::move(out)) {}
  absl::StatusOr<std::string> Optimize(const std::string&,
                                       const std::vector<agents::FailureTrace>&) override {
    return out_;
  }

 private:
  std::string out_;
};

class FailingExecutor : public agents::Executor {
 public:
  absl::StatusOr<agents::RunResult> Run(const Skill&, const Instance&, const agents::Budgets&,
                                        uint64_t) override {
    return MakeError(ErrorKind::kTransportError, "down");
  }
};

Instance Cap(const std::string& id, const std::string& reqs) {
  Instance inst{id, reqs, ":memory:", {}, Dialect::kSqlite};
  inst.gold.result = ResultTable{{"answer"}, {{id}}};
  return inst;
}

SkillPool Pool(std::vector<std::string> prompts) {
  std::vector<Skill> skills;
  for (size_t i = 0; i < prompts.size(); ++i) {
    skills.push_back({"skill-" + std::to_string(i + 1), prompts[i]});
  }
  return *SkillPool::Create(std::move(skills));
}

struct Harness {
  explicit Harness(SkillOptimizer* opt, double noise = 0.0) : executor(noise) {
    engine.executor = &executor;
    engine.optimizer = opt;
    engine.gold = &gold;
  }
  agents::SyntheticExecutor executor;
  exec::GoldResolver gold;
  Engine engine;
};

TEST(RotationTest, StrideOneOffset) {
  EXPECT_EQ(RotationStride(8, 8), 1);
  EXPECT_EQ(RotationOrdering(8, 3, 8), (std::vector<size_t>{2, 3, 4, 5, 6, 7, 0, 1}));
}

TEST(RotationTest, StrideThree) {
  EXPECT_EQ(RotationStride(8, 3), 3);
  EXPECT_EQ(RotationOrdering(8, 1, 3)[0], 0u);
  EXPECT_EQ(RotationOrdering(8, 2, 3)[0], 3u);
  EXPECT_EQ(RotationOrdering(8, 3, 3)[0], 6u);
}

TEST(RotationTest, SingleSkill) {
  for (int t = 1; t <= 4; ++t) EXPECT_EQ(RotationOrdering(1, t, 4), (std::vector<size_t>{0}));
}

TEST(RotationTest, EachSkillLeadsOnceWhenTEqualsK) {
  std::map<size_t, int> leads;
  for (int t = 1; t <= 5; ++t) ++leads[RotationOrdering(5, t, 5)[0]];
  EXPECT_EQ(leads.size(), 5u);
}

TEST(AcceptTest, Rules) {
  auto d = AcceptUpdate("aaaa", "aaaaa", Rational(3, 10), Rational(4, 10));
  EXPECT_TRUE(d.accept);
  EXPECT_EQ(d.reason, AcceptReason::kStrictImprovement);
  d = AcceptUpdate("aaaa", "aaa", Rational(1, 2), Rational(1, 2));
  EXPECT_TRUE(d.accept);
  EXPECT_EQ(d.reason, AcceptReason::kBrevityTiebreak);
  EXPECT_FALSE(AcceptUpdate("aaaa", "aaaa", Rational(1, 2), Rational(1, 2)).accept);
  EXPECT_FALSE(AcceptUpdate("aaaa", "aaaaa", Rational(1, 2), Rational(1, 2)).accept);
  EXPECT_FALSE(AcceptUpdate("a", "a", Rational(1, 2), Rational(1, 3)).accept);
}

TEST(RunBatchTest, ResidualHalvesAfterFirstPosition) {
  IdentityOptimizer opt;
  Harness h(&opt);
  const std::vector<Instance> batch = {Cap("x1", "req:a"), Cap("x2", "req:a"),
                                       Cap("x3", "req:b"), Cap("x4", "req:b")};
  const RunConfig cfg{.K = 2, .T = 1, .b = 4, .rng_seed = 1};
  auto r = RunBatch(Pool({"cap:a", "cap:c"}), batch, 1, cfg, h.engine);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->trace.positions[0].residual_before.size(), 4u);
  EXPECT_EQ(r->trace.positions[0].residual_after.size(), 2u);
}

TEST(RunBatchTest, IdentityOptimizerNeverAccepts) {
  IdentityOptimizer opt;
  Harness h(&opt);
  const std::vector<Instance> batch = {Cap("x1", "req:a"), Cap("x2", "req:b"),
                                       Cap("x3", "req:c")};
  const SkillPool pool = Pool({"cap:a", "cap:b"});
  const RunConfig cfg{.K = 2, .T = 1, .b = 3, .rng_seed = 1};
  auto r = RunBatch(pool, batch, 1, cfg, h.engine);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->pool, pool);
  for (const auto& p : r->trace.positions) {
    EXPECT_FALSE(p.accepted);
    EXPECT_EQ(p.reason, AcceptReason::kNotBetter);
  }
  EXPECT_EQ(r->trace.positions[1].residual_after, (std::set<std::string>{"x3"}));
}

TEST(RunBatchTest, EmptyResidualSkipsLaterPositions) {
  IdentityOptimizer opt;
  Harness h(&opt);
  const std::vector<Instance> batch = {Cap("x1", "req:a"), Cap("x2", "req:a")};
  const RunConfig cfg{.K = 3, .T = 1, .b = 2, .rng_seed = 1};
  auto r = RunBatch(Pool({"cap:a", "cap:b", "cap:c"}), batch, 1, cfg, h.engine);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->trace.positions[0].reason, AcceptReason::kNoFailures);
  EXPECT_TRUE(r->trace.positions[0].residual_after.empty());
  EXPECT_EQ(r->trace.positions[1].reason, AcceptReason::kSkipped);
  EXPECT_EQ(r->trace.positions[2].reason, AcceptReason::kSkipped);
  EXPECT_EQ(opt.calls, 0);
}

TEST(RunBatchTest, ScreenViolationRejectsProposal) {
  FixedOptimizer opt("cap:a cap:b use QUALIFY");
  Harness h(&opt);
  const std::vector<Instance> batch = {Cap("x1", "req:b")};
  const RunConfig cfg{.K = 1, .T = 1, .b = 1, .rng_seed = 1};
  auto r = RunBatch(Pool({"cap:a"}), batch, 1, cfg, h.engine);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->trace.positions[0].reason, AcceptReason::kScreenViolation);
  EXPECT_EQ(r->trace.positions[0].screen_violation, "qualify");
  EXPECT_EQ(r->pool.at(0).prompt, "cap:a");
}

TEST(RunBatchTest, OverlongProposalRejected) {
  FixedOptimizer opt("cap:a cap:b " + std::string(100, 'x'));
  Harness h(&opt);
  const RunConfig cfg{.K = 1, .T = 1, .b = 1, .max_prompt_len = 50, .rng_seed = 1};
  auto r = RunBatch(Pool({"cap:a"}), {Cap("x1", "req:b")}, 1, cfg, h.engine);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->trace.positions[0].reason, AcceptReason::kTooLong);
}

TEST(RunBatchTest, ExecutorFailureNamesPosition) {
  IdentityOptimizer opt;
  FailingExecutor executor;
  exec::GoldResolver gold;
  Engine engine{&executor, &opt, &gold, {}};
  const RunConfig cfg{.K = 1, .T = 1, .b = 1, .rng_seed = 1};
  auto r = RunBatch(Pool({"cap:a"}), {Cap("x1", "req:a")}, 2, cfg, engine);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(KindOf(r.status()), ErrorKind::kExecutorFailure);
  EXPECT_NE(std::string(r.status().message()).find("batch 2 position 1"), std::string::npos);
}

TEST(RunTest, ZeroBatchesReturnsPoolUnchanged) {
  MutationOptimizer opt;
  Harness h(&opt);
  const SkillPool pool = Pool({"cap:a"});
  auto out = optimizer::Run(pool, {Cap("x1", "req:b")}, {.K = 1, .T = 0, .b = 1, .rng_seed = 3}, h.engine);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->pool, pool);
  EXPECT_TRUE(out->traces.empty());
}

TEST(RunTest, ConfigErrors) {
  MutationOptimizer opt;
  Harness h(&opt);
  auto out = optimizer::Run(Pool({"cap:a"}), {Cap("x1", "req:b")}, {.K = 1, .T = 1, .b = 2}, h.engine);
  EXPECT_EQ(KindOf(out.status()), ErrorKind::kConfigError);
  out = optimizer::Run(Pool({"cap:a"}), {Cap("x1", "req:b")}, {.K = 2, .T = 1, .b = 1}, h.engine);
  EXPECT_EQ(KindOf(out.status()), ErrorKind::kConfigError);
}

TEST(RunTest, SampleBatchesDistinctWithinBatch) {
  const auto batches = SampleBatches(30, 5, 10, 42);
  ASSERT_EQ(batches.size(), 5u);
  for (const auto& b : batches) {
    EXPECT_EQ(std::set<size_t>(b.begin(), b.end()).size(), 10u);
  }
  EXPECT_EQ(SampleBatches(30, 5, 10, 42), batches);
  EXPECT_NE(SampleBatches(30, 5, 10, 43), batches);
}

TEST(RunTest, ReplayIsByteIdentical) {
  auto family = pipeline::MakeSyntheticFamily({.capabilities = 3, .train = 30, .heldout = 0,
                                               .seed = 5});
  ASSERT_TRUE(family.ok());
  const RunConfig cfg{.K = 3, .T = 3, .b = 10, .rng_seed = 99};
  std::vector<std::string> dumps;
  for (int rep = 0; rep < 2; ++rep) {
    MutationOptimizer opt;
    Harness h(&opt, 0.2);
    auto out = optimizer::Run(family->seeds, family->train, cfg, h.engine);
    ASSERT_TRUE(out.ok()) << out.status();
    std::string all = DumpJson(SkillPoolToJson(out->pool));
    for (const auto& t : out->traces) all += DumpJson(BatchTraceToJson(t));
    dumps.push_back(all);
  }
  EXPECT_EQ(dumps[0], dumps[1]);
}

TEST(RunTest, MutationCoversAllCapabilities) {
  auto family = pipeline::MakeSyntheticFamily({.capabilities = 3, .train = 60, .heldout = 40,
                                               .seed = 1});
  ASSERT_TRUE(family.ok());
  MutationOptimizer opt;
  Harness h(&opt);
  auto out = optimizer::Run(family->seeds, family->train, {.K = 3, .T = 3, .b = 20, .rng_seed = 1},
                 h.engine);
  ASSERT_TRUE(out.ok()) << out.status();
  std::vector<metrics::InstanceCandidates> cands;
  for (const Instance& inst : family->heldout) {
    metrics::InstanceCandidates ic{inst.instance_id, {}};
    for (const Skill& s : out->pool.skills()) {
      std::mt19937_64 rng(0);
      const auto r = agents::SimulatedExecute(s, inst, 0.0, rng);
      ic.successes.push_back(!exec::IsError(*r.execution) &&
                             exec::ResultsMatch(std::get<ResultTable>(*r.execution),
                                                *inst.gold.result));
    }
    cands.push_back(ic);
  }
  EXPECT_DOUBLE_EQ(metrics::DatasetPassCurve(cands)->values.at(3), 1.0);
}

TEST(RunDirectoryTest, WritesLayout) {
  TempDir dir;
  MutationOptimizer opt;
  Harness h(&opt);
  auto family = pipeline::MakeSyntheticFamily({.capabilities = 2, .train = 10, .heldout = 0,
                                               .seed = 2});
  const RunConfig cfg{.K = 2, .T = 2, .b = 5, .rng_seed = 4};
  auto out = optimizer::Run(family->seeds, family->train, cfg, h.engine);
  ASSERT_TRUE(out.ok());
  ASSERT_TRUE(WriteRunDirectory(dir.path(), RunConfigToJson(cfg), family->seeds, *out).ok());
  for (const char* f : {"config.json", "pool_initial.json", "pool_final.json", "outcomes.jsonl",
                        "traces/batch_1.json", "traces/batch_2.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.path() / f)) << f;
  }
}

TEST(ScreenTest, WholeWordCaseInsensitive) {
  const LexicalScreen screen({"orders", "customer_id"}, DefaultDialectDenylist());
  EXPECT_EQ(screen.Violation("Join ORDERS first"), "orders");
  EXPECT_EQ(screen.Violation("check customer_id"), "customer_id");
  EXPECT_FALSE(screen.Violation("reorders are fine").has_value());
  EXPECT_EQ(screen.Violation("prefer IFF()"), "iff");
}

TEST(LlmOptimizerTest, ReadsSkillFromFencedBlock) {
  LlmSkillOptimizer opt(
      [] {
        return std::make_unique<ScriptedChatClient>(std::vector<agents::ChatMessage>{
            {"assistant", "Here:\n```\nBe precise about joins.\n```", {}, {}}});
      },
      {});
  auto p = opt.Optimize("Be precise.", {{Cap("x", "q"), {}, "wrong answer"}});
  ASSERT_TRUE(p.ok()) << p.status();
  EXPECT_EQ(*p, "Be precise about joins.");
  EXPECT_EQ(KindOf(opt.Optimize("x", {}).status()), ErrorKind::kNoFailures);
}

TEST(LlmOptimizerTest, ReflectionPromptMentionsFailures) {
  const std::string p = ReflectionPrompt("old skill", {{Cap("x7", "how many?"), {}, "err"}}, 8);
  EXPECT_NE(p.find("old skill"), std::string::npos);
  EXPECT_NE(p.find("how many?"), std::string::npos);
}

}  // namespace
}  // namespace divskill::optimizer
