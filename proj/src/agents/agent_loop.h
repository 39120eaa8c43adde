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


// Tool-calling agent loop. One turn is one model call. The skill prompt is
// the system message, verbatim; the user message carries the question, the
// dialect and a schema summary.
//
// Budgets: at most `max_turns` model calls and at most `max_turns` recorded
// tool calls; an execute_sql beyond `max_sql_execs` is refused and ends the
// episode. A malformed tool call earns one repair nudge and still uses its
// turn. On any ending other than submit_final_sql, the last SQL drafted in a
// fenced block is returned.

#ifndef DIVSKILL_AGENTS_AGENT_LOOP_H_
#define DIVSKILL_AGENTS_AGENT_LOOP_H_

#include <functional>
#include <memory>
#include <string>

#include "absl/status/statusor.h"
#include "agents/chat.h"
#include "agents/executor.h"
#include "agents/tools.h"

namespace divskill::agents {

struct AgentLoopOptions {
  std::string model;
  RetryPolicy retry;
  exec::ExecLimits limits;  // for the final execution of the answer
  bool include_schema = true;
};

std::string TaskMessage(const Instance& instance, bool include_schema);

// Never fails for model misbehaviour; those end up in RunResult. A non-OK
// status means invalid budgets.
absl::StatusOr<RunResult> RunAgentLoop(ChatClient& client, const Skill& skill,
                                       const Instance& instance,
                                       const Budgets& budgets,
                                       const ToolBox& tools,
                                       const AgentLoopOptions& options,
                                       std::optional<uint64_t> seed = {});

using ChatClientFactory = std::function<std::unique_ptr<ChatClient>()>;

// Each run gets its own client from the factory.
class LlmAgentExecutor : public Executor {
 public:
  LlmAgentExecutor(ChatClientFactory factory, ToolBox tools,
                   AgentLoopOptions options)
      : factory_(std::move(factory)),
        tools_(std::move(tools)),
        options_(std::move(options)) {}

  absl::StatusOr<RunResult> Run(const Skill& skill, const Instance& instance,
                                const Budgets& budgets, uint64_t seed) override;

 private:
  ChatClientFactory factory_;
  ToolBox tools_;
  AgentLoopOptions options_;
};

}  // namespace divskill::agents

#endif  // DIVSKILL_AGENTS_AGENT_LOOP_H_
