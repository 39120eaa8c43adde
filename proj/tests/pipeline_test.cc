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


#include <fstream>

#include "core/errors.h"
#include "core/util.h"
#include "gtest/gtest.h"
#include "pipeline/commands.h"
#include "pipeline/config.h"
#include "pipeline/synthetic_family.h"
#include "test_support.h"

namespace divskill::pipeline {
namespace {

using divskill::testing::TempDir;

void Write(const std::filesystem::path& p, const std::string& text) {
  ASSERT_TRUE(WriteFile(p, text).ok());
}

std::string Slurp(const std::filesystem::path& p) { return *ReadFile(p); }

TEST(ConfigTest, ParsesSectionsAndResolvesPaths) {
  TempDir dir;
  Write(dir.path() / "c.toml",
        "[run]\nK = 3\nT = 2\nb = 5\nrng_seed = 9\n"
        "[budgets]\nmax_turns = 8\n"
        "[match]\nfloat_sig_digits = 4\n"
        "[paths]\nseed_pool = \"seeds.json\"\n"
        "[screen]\ndialect_denylist = [\"qualify\"]\n");
  auto c = LoadConfig(dir.path() / "c.toml");
  ASSERT_TRUE(c.ok()) << c.status();
  EXPECT_EQ(c->K, 3);
  EXPECT_EQ(c->T, 2);
  EXPECT_EQ(c->rng_seed, 9u);
  EXPECT_EQ(c->budgets.max_turns, 8);
  EXPECT_EQ(c->match.float_sig_digits, 4);
  EXPECT_EQ(*c->seed_pool, dir.path() / "seeds.json");
  EXPECT_EQ(*c->dialect_denylist, (std::set<std::string>{"qualify"}));
}

TEST(ConfigTest, RejectsUnknownKeysAndSections) {
  TempDir dir;
  Write(dir.path() / "a.toml", "[run]\nTT = 2\n");
  EXPECT_EQ(KindOf(LoadConfig(dir.path() / "a.toml").status()), ErrorKind::kConfigError);
  Write(dir.path() / "b.toml", "[runs]\nT = 2\n");
  EXPECT_EQ(KindOf(LoadConfig(dir.path() / "b.toml").status()), ErrorKind::kConfigError);
  Write(dir.path() / "c.toml", "[run]\nT = \"two\"\n");
  EXPECT_EQ(KindOf(LoadConfig(dir.path() / "c.toml").status()), ErrorKind::kConfigError);
}

TEST(ConfigTest, JsonOverrideWins) {
  TempDir dir;
  Write(dir.path() / "c.toml", "[run]\nT = 2\nb = 4\n");
  auto c = LoadConfig(dir.path() / "c.toml", R"({"run": {"T": 7}})");
  ASSERT_TRUE(c.ok()) << c.status();
  EXPECT_EQ(c->T, 7);
  EXPECT_EQ(c->b, 4);
  EXPECT_FALSE(LoadConfig(dir.path() / "c.toml", "{not json").ok());
}

TEST(ConfigTest, ValidatesRanges) {
  EXPECT_FALSE(LoadConfig({}, R"({"budgets": {"max_turns": 0}})").ok());
  EXPECT_FALSE(LoadConfig({}, R"({"synthetic": {"noise": 1.5}})").ok());
}

TEST(ConfigTest, MalformedToml) {
  EXPECT_EQ(KindOf(TomlToJson("[run\nT=").status()), ErrorKind::kConfigError);
}

TEST(SyntheticFamilyTest, ShapeAndDeterminism) {
  auto a = MakeSyntheticFamily({.capabilities = 3, .train = 60, .heldout = 40, .seed = 4});
  auto b = MakeSyntheticFamily({.capabilities = 3, .train = 60, .heldout = 40, .seed = 4});
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a->train.size(), 60u);
  EXPECT_EQ(a->heldout.size(), 40u);
  EXPECT_EQ(a->seeds.size(), 3u);
  EXPECT_EQ(a->seeds.at(1).prompt, "cap:b");
  EXPECT_EQ(a->train, b->train);
}

class CommandsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    auto sim = RunSimulateCommand({.out_dir = dir_.path(), .seed = 3});
    ASSERT_TRUE(sim.ok()) << sim.status();
    config_ = dir_.path() / "config.toml";
  }

  absl::StatusOr<nlohmann::json> Optimize(const std::string& out) {
    OptimizeArgs a;
    a.common.config = config_;
    a.train = dir_.path() / "train.jsonl";
    a.out_dir = dir_.path() / out;
    return RunOptimizeCommand(a);
  }

  TempDir dir_;
  std::filesystem::path config_;
};

TEST_F(CommandsTest, OptimizeReplayIsByteIdentical) {
  ASSERT_TRUE(Optimize("r1").ok());
  ASSERT_TRUE(Optimize("r2").ok());
  EXPECT_EQ(Slurp(dir_.path() / "r1/pool_final.json"), Slurp(dir_.path() / "r2/pool_final.json"));
  EXPECT_EQ(Slurp(dir_.path() / "r1/outcomes.jsonl"), Slurp(dir_.path() / "r2/outcomes.jsonl"));
}

TEST_F(CommandsTest, ManifestRecordsInputsAndSeeds) {
  ASSERT_TRUE(Optimize("r1").ok());
  const auto m = nlohmann::json::parse(Slurp(dir_.path() / "r1/run_manifest.json"));
  EXPECT_EQ(m["command"], "optimize");
  bool saw_train = false;
  for (const auto& in : m["inputs"]) {
    if (in["path"].get<std::string>().find("train.jsonl") != std::string::npos) {
      saw_train = true;
      EXPECT_EQ(in["sha256"], Sha256Hex(Slurp(dir_.path() / "train.jsonl")));
    }
  }
  EXPECT_TRUE(saw_train);
  EXPECT_EQ(m["seeds"]["rng_seed"], 3);
}

TEST_F(CommandsTest, SyntheticRunsNeedASeed) {
  OptimizeArgs a;
  a.common.overrides = R"({"run": {"rng_seed": null}})";
  a.common.config = config_;
  a.train = dir_.path() / "train.jsonl";
  a.out_dir = dir_.path() / "x";
  EXPECT_EQ(KindOf(RunOptimizeCommand(a).status()), ErrorKind::kConfigError);
}

TEST_F(CommandsTest, InferEvaluateAnalyze) {
  ASSERT_TRUE(Optimize("run").ok());
  InferArgs in;
  in.common.config = config_;
  in.pool = dir_.path() / "run";
  in.dataset = dir_.path() / "heldout.jsonl";
  in.out = dir_.path() / "inf/selections.jsonl";
  auto inferred = RunInferCommand(in);
  ASSERT_TRUE(inferred.ok()) << inferred.status();
  const std::string sel = Slurp(in.out);
  EXPECT_EQ(std::count(sel.begin(), sel.end(), '\n'), 40);
  const auto row = nlohmann::json::parse(sel.substr(0, sel.find('\n')));
  for (const char* key : {"instance_id", "winner_skill_id", "sql", "G", "win_counts"}) {
    EXPECT_TRUE(row.contains(key)) << key;
  }

  EvaluateArgs ev;
  ev.common.config = config_;
  ev.selections = in.out;
  ev.dataset = in.dataset;
  auto report = RunEvaluateCommand(ev);
  ASSERT_TRUE(report.ok()) << report.status();
  const double selected = (*report)["selected_accuracy"];
  const double pass3 = (*report)["pass_curve"]["3"];
  EXPECT_LE(selected, pass3 + 1e-12);
  EXPECT_GE(pass3, 0.95);

  AnalyzeArgs an;
  an.runs = dir_.path() / "inf";
  an.out = dir_.path() / "sim.json";
  auto sim = RunAnalyzeCommand(an);
  ASSERT_TRUE(sim.ok()) << sim.status();
  EXPECT_EQ((*sim)["bin_width"], 0.05);
  EXPECT_TRUE(std::filesystem::exists(dir_.path() / "sim.json"));
}

TEST_F(CommandsTest, EvaluateOnFixture) {
  // Two instances, three candidates each; selections right on one.
  Write(dir_.path() / "ds.jsonl",
        R"({"id":"a","question":"q","db":":memory:","gold_sql":"SELECT 1","dialect":"sqlite"})"
        "\n"
        R"({"id":"b","question":"q","db":":memory:","gold_sql":"SELECT 2","dialect":"sqlite"})"
        "\n");
  Write(dir_.path() / "sel.jsonl",
        R"({"instance_id":"a","winner_skill_id":"s1","sql":"SELECT 1","G":2,"win_counts":{}})"
        "\n"
        R"({"instance_id":"b","winner_skill_id":"s1","sql":"SELECT 3","G":2,"win_counts":{}})"
        "\n");
  std::string cands;
  const char* rows[][3] = {{"a", "0", "SELECT 1"}, {"a", "1", "SELECT 9"}, {"a", "2", "SELECT 9"},
                           {"b", "0", "SELECT 3"}, {"b", "1", "SELECT 2"}, {"b", "2", "SELECT 9"}};
  for (auto& r : rows) {
    cands += nlohmann::json{{"instance_id", r[0]}, {"skill_index", std::stoi(r[1])},
                            {"sql", r[2]}}.dump() + "\n";
  }
  Write(dir_.path() / "cands.jsonl", cands);
  EvaluateArgs ev;
  ev.selections = dir_.path() / "sel.jsonl";
  ev.dataset = dir_.path() / "ds.jsonl";
  ev.candidates = dir_.path() / "cands.jsonl";
  auto report = RunEvaluateCommand(ev);
  ASSERT_TRUE(report.ok()) << report.status();
  // Per instance pass@1 = 1/3; pass@2 = 1 - C(2,2)/C(3,2) = 2/3; pass@3 = 1.
  EXPECT_NEAR((*report)["pass_curve"]["1"].get<double>(), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR((*report)["pass_curve"]["2"].get<double>(), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR((*report)["pass_curve"]["3"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR((*report)["selected_accuracy"].get<double>(), 0.5, 1e-12);
}

TEST(VerifyGreedyCommandTest, ZeroViolations) {
  auto r = RunVerifyGreedyCommand({.skills = 6, .instances = 20, .k = 3, .trials = 50, .seed = 7});
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE((*r)["violations"].empty());
}

}  // namespace
}  // namespace divskill::pipeline
