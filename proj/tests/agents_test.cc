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

#include "agents/agent_loop.h"
#include "agents/chat.h"
#include "agents/synthetic.h"
#include "agents/tools.h"
#include "core/errors.h"
#include "exec/sqlite_runner.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace divskill::agents {
namespace {

using divskill::testing::MakeShopDb;
using divskill::testing::ScriptedChatClient;
using divskill::testing::SqlArg;
using divskill::testing::TempDir;
using divskill::testing::ToolReply;
using trajectory::Action;

Instance CapInstance(const std::string& reqs) {
  Instance inst{"x", reqs, ":memory:", {}, Dialect::kSqlite};
  inst.gold.result = ResultTable{{"answer"}, {{std::string("x")}}};
  return inst;
}

bool Succeeds(const RunResult& r, const Instance& inst) {
  return r.execution && !exec::IsError(*r.execution) &&
         std::get<ResultTable>(*r.execution).rows == inst.gold.result->rows;
}

FailureTrace Failure(const std::string& reqs) { return {CapInstance(reqs), {}, ""}; }

TEST(SyntheticTest, CoveredSucceeds) {
  std::mt19937_64 rng(1);
  const Instance inst = CapInstance("req:a");
  EXPECT_TRUE(Succeeds(SimulatedExecute({"s", "cap:a cap:b"}, inst, 0.0, rng), inst));
}

TEST(SyntheticTest, UncoveredFailsRegardlessOfNoise) {
  std::mt19937_64 rng(1);
  const Instance inst = CapInstance("req:c");
  for (double eps : {0.0, 0.5}) {
    EXPECT_FALSE(Succeeds(SimulatedExecute({"s", "cap:a"}, inst, eps, rng), inst));
  }
}

TEST(SyntheticTest, NoiseRateMonteCarlo) {
  std::mt19937_64 rng(2026);
  const Instance inst = CapInstance("req:a");
  int ok = 0;
  for (int i = 0; i < 10000; ++i) {
    ok += Succeeds(SimulatedExecute({"s", "cap:a"}, inst, 0.25, rng), inst);
  }
  EXPECT_NEAR(ok / 10000.0, 0.75, 0.02);
}

TEST(SyntheticTest, PureWithoutNoise) {
  const Instance inst = CapInstance("req:a req:b");
  std::mt19937_64 r1(1), r2(999);
  const RunResult a = SimulatedExecute({"s", "cap:a"}, inst, 0.0, r1);
  const RunResult b = SimulatedExecute({"s", "cap:a"}, inst, 0.0, r2);
  EXPECT_EQ(a.sql, b.sql);
  EXPECT_EQ(a.trajectory, b.trajectory);
}

TEST(SyntheticTest, ParsesTags) {
  EXPECT_EQ(CapabilityString(ParseCapabilities("cap:c and cap:a, not xcap:b or cap:bb")), "ac");
  EXPECT_FALSE(ParseSyntheticSkill({"s", "cap:a"}, 1.0).ok());
}

TEST(MutateTest, AddsMostFrequentUnmet) {
  auto p = MutateSkill("cap:a", {Failure("req:c"), Failure("req:a req:c")});
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(*p, "cap:a cap:c");
}

TEST(MutateTest, TieGoesToEarlierLetter) {
  EXPECT_EQ(*MutateSkill("cap:a", {Failure("req:c"), Failure("req:b")}), "cap:a cap:b");
}

TEST(MutateTest, ReparsedIsUnion) {
  auto p = MutateSkill("cap:a cap:d", {Failure("req:b")});
  EXPECT_EQ(CapabilityString(ParseCapabilities(*p)), "abd");
}

TEST(MutateTest, NoFailures) {
  EXPECT_EQ(KindOf(MutateSkill("cap:a", {}).status()), ErrorKind::kNoFailures);
}

TEST(ChatTest, ParsesEnvelopeAndToolCalls) {
  const auto body = nlohmann::json::parse(R"({"choices":[{"message":{"role":"assistant",
      "content":null,"tool_calls":[{"id":"c1","type":"function","function":
      {"name":"execute_sql","arguments":"{\"sql\":\"SELECT 1\"}"}}]}}]})");
  auto m = ParseChatResponse(body);
  ASSERT_TRUE(m.ok());
  ASSERT_EQ(m->tool_calls.size(), 1u);
  EXPECT_EQ(m->tool_calls[0].name, "execute_sql");
  EXPECT_EQ(m->tool_calls[0].arguments, R"({"sql":"SELECT 1"})");
  EXPECT_EQ(KindOf(ParseChatResponse(nlohmann::json::parse(R"({"choices":[]})")).status()),
            ErrorKind::kTransportError);
}

TEST(ChatTest, ExtractSqlBlock) {
  EXPECT_EQ(ExtractSqlBlock("text\n```python\nx\n```\n```sql\nSELECT 2\n```"), "SELECT 2");
  EXPECT_EQ(ExtractSqlBlock("no block"), "");
}

class FlakyClient : public ChatClient {
 public:
  explicit FlakyClient(int failures) : failures_(failures) {}
  absl::StatusOr<ChatMessage> Complete(const ChatRequest&) override {
    ++calls;
    if (failures_-- > 0) return MakeError(ErrorKind::kTransportError, "503");
    return ChatMessage{"assistant", "ok", {}, {}};
  }
  int calls = 0;

 private:
  int failures_;
};

TEST(ChatTest, RetriesTransportErrors) {
  FlakyClient client(2);
  auto m = CompleteWithRetry(client, {}, {3, std::chrono::milliseconds(0)});
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(client.calls, 3);
  FlakyClient dead(5);
  EXPECT_FALSE(CompleteWithRetry(dead, {}, {3, std::chrono::milliseconds(0)}).ok());
  EXPECT_EQ(dead.calls, 3);
}

TEST(ToolsTest, ReviewFindings) {
  EXPECT_FALSE(ReviewSql("SELECT * FROM t").empty());
  EXPECT_FALSE(ReviewSql("SELECT region, sum(amount) FROM t").empty());
  EXPECT_TRUE(ReviewSql("SELECT region, sum(amount) FROM t GROUP BY region").empty());
  EXPECT_FALSE(ReviewSql("SELECT name FROM a JOIN b ON a.id = b.id").empty());
}

TEST(ToolsTest, SnippetLookupByTag) {
  SnippetStore store;
  store.Add("window", "use ROW_NUMBER() OVER (...)");
  EXPECT_EQ(store.Lookup("how do I write a window function"),
            "[window]\nuse ROW_NUMBER() OVER (...)");
  EXPECT_EQ(store.Lookup("windows"), "no matching snippet");
}

TEST(ToolsTest, DispatchErrors) {
  ToolBox tools;
  const Instance inst = CapInstance("req:a");
  EXPECT_EQ(KindOf(tools.Dispatch({"c", "shell", "{}"}, inst).status()), ErrorKind::kUnknownTool);
  EXPECT_EQ(KindOf(tools.Dispatch({"c", "execute_sql", "not json"}, inst).status()),
            ErrorKind::kMalformedToolCall);
  EXPECT_EQ(KindOf(tools.Dispatch({"c", "execute_sql", "{}"}, inst).status()),
            ErrorKind::kMalformedToolCall);
  auto r = tools.Dispatch({"c", "execute_sql", SqlArg("sql", "SELECT 1")}, inst);
  ASSERT_TRUE(r.ok());
  EXPECT_FALSE(r->event.exec_error);
  EXPECT_NE(r->content.find("(1 rows)"), std::string::npos);
}

class AgentLoopTest : public ::testing::Test {
 protected:
  void SetUp() override {
    db_ = MakeShopDb(dir_.path());
    inst_ = divskill::testing::ShopInstance(
        db_, "SELECT region, sum(amount) FROM orders JOIN customers "
             "ON customers.id = orders.customer_id GROUP BY region");
    options_.retry = {1, std::chrono::milliseconds(0)};
  }

  RunResult Run(ScriptedChatClient& client, const Budgets& budgets = {}) {
    auto r = RunAgentLoop(client, skill_, inst_, budgets, tools_, options_, 7);
    EXPECT_TRUE(r.ok()) << r.status();
    return *r;
  }

  TempDir dir_;
  std::string db_;
  Instance inst_;
  Skill skill_{"skill-1", "You are careful. Inspect the schema first."};
  ToolBox tools_;
  AgentLoopOptions options_;
};

TEST_F(AgentLoopTest, SubmitOnFirstTurn) {
  ScriptedChatClient client({ToolReply("", "submit_final_sql", SqlArg("sql", "SELECT 1"))});
  const RunResult r = Run(client);
  EXPECT_EQ(r.termination, Termination::kSubmitted);
  EXPECT_EQ(r.sql, "SELECT 1");
  EXPECT_EQ(r.trajectory.actions, (std::vector<Action>{Action::kSubmit}));
}

TEST_F(AgentLoopTest, GoldenTranscript) {
  const std::string bad = "SELECT regoin, sum(amount) FROM orders JOIN customers "
                          "ON customers.id = orders.customer_id GROUP BY regoin";
  const std::string good = *inst_.gold.sql;
  ScriptedChatClient client({
      ToolReply("", "execute_sql", SqlArg("sql", "SELECT name, sql FROM sqlite_master")),
      ToolReply("Draft:\n```sql\n" + bad + "\n```", "execute_sql", SqlArg("sql", bad)),
      ToolReply("", "execute_sql", SqlArg("sql", good)),
      ToolReply("", "submit_final_sql", SqlArg("sql", good)),
  });
  const RunResult r = Run(client);
  EXPECT_EQ(r.termination, Termination::kSubmitted);
  EXPECT_EQ(r.trajectory.actions,
            (std::vector<Action>{Action::kInspectSchema, Action::kDraftSql, Action::kExecute,
                                 Action::kRepair, Action::kSubmit}));
  ASSERT_TRUE(r.execution.has_value());
  EXPECT_FALSE(exec::IsError(*r.execution));
  // The skill is the system message, verbatim.
  EXPECT_EQ(client.requests[0].messages[0].role, "system");
  EXPECT_EQ(client.requests[0].messages[0].content, skill_.prompt);
  // The failed execution was reported back with the engine message.
  const auto& msgs = client.requests[2].messages;
  EXPECT_NE(msgs.back().content.find("no such column: regoin"), std::string::npos);
}

TEST_F(AgentLoopTest, NeverSubmitsSurfacesLastDraft) {
  std::vector<ChatMessage> script;
  for (int i = 0; i < 20; ++i) {
    script.push_back(ToolReply("```sql\nSELECT " + std::to_string(i) + "\n```", "lookup_docs",
                               SqlArg("query", "joins")));
  }
  ScriptedChatClient client(script);
  const RunResult r = Run(client);
  EXPECT_EQ(r.termination, Termination::kTurnsExhausted);
  EXPECT_EQ(r.sql, "SELECT 11");
  EXPECT_EQ(client.requests.size(), 12u);
  size_t tool_calls = 0;
  for (Action a : r.trajectory.actions) tool_calls += a != Action::kDraftSql;
  EXPECT_LE(tool_calls, 12u);
}

TEST_F(AgentLoopTest, ExecutionBudgetStopsLoop) {
  std::vector<ChatMessage> script;
  for (int i = 0; i < 10; ++i) {
    script.push_back(ToolReply("", "execute_sql", SqlArg("sql", "SELECT 1")));
  }
  ScriptedChatClient client(script);
  const RunResult r = Run(client, {.max_turns = 12, .max_sql_execs = 3});
  EXPECT_EQ(r.termination, Termination::kExecsExhausted);
  EXPECT_EQ(r.trajectory.actions.size(), 3u);
  EXPECT_FALSE(r.error.empty());  // no draft, no SQL
}

TEST_F(AgentLoopTest, MalformedCallGetsOneNudge) {
  ScriptedChatClient client({
      ToolReply("", "execute_sql", "{oops"),
      ToolReply("", "execute_sql", "{oops"),
      ToolReply("", "submit_final_sql", SqlArg("sql", "SELECT 1")),
  });
  const RunResult r = Run(client);
  EXPECT_EQ(r.termination, Termination::kSubmitted);
  EXPECT_EQ(r.trajectory.actions, (std::vector<Action>{Action::kSubmit}));
  EXPECT_NE(client.requests[1].messages.back().content.find("Re-issue"), std::string::npos);
  EXPECT_EQ(client.requests[2].messages.back().content.find("Re-issue"), std::string::npos);
}

TEST_F(AgentLoopTest, PlainTextReplyEndsWithNoAnswer) {
  ScriptedChatClient client({{"assistant", "```sql\nSELECT 5\n```", {}, {}}});
  const RunResult r = Run(client);
  EXPECT_EQ(r.termination, Termination::kNoAnswer);
  EXPECT_EQ(r.sql, "SELECT 5");
}

TEST_F(AgentLoopTest, TransportFailure) {
  FlakyClient client(100);
  auto r = RunAgentLoop(client, skill_, inst_, {}, tools_, options_);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->termination, Termination::kTransportFailed);
  EXPECT_TRUE(r->sql.empty());
  EXPECT_FALSE(r->error.empty());
}

TEST_F(AgentLoopTest, ToolSetIdenticalAcrossSkills) {
  ScriptedChatClient a({}), b({});
  Run(a);
  skill_.prompt = "A completely different skill.";
  Run(b);
  ASSERT_EQ(a.requests[0].tools.size(), 6u);
  EXPECT_EQ(ChatRequestToJson(a.requests[0])["tools"], ChatRequestToJson(b.requests[0])["tools"]);
}

}  // namespace
}  // namespace divskill::agents
