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


#include "agents/agent_loop.h"

#include "absl/strings/str_cat.h"
#include "core/errors.h"

namespace divskill::agents {
namespace {

ChatMessage ToolMessage(const ToolCall& call, std::string content) {
  ChatMessage m;
  m.role = "tool";
  m.tool_call_id = call.id;
  m.content = std::move(content);
  return m;
}

}  // namespace

std::string TaskMessage(const Instance& instance, bool include_schema) {
  std::string out = absl::StrCat("Question: ", instance.question,
                                 "\nSQL dialect: ", std::string(DialectName(instance.dialect)));
  if (include_schema) {
    auto schema = exec::SchemaSummary(instance.db_ref);
    if (schema.ok() && !schema->empty()) absl::StrAppend(&out, "\nSchema:\n", *schema);
  }
  absl::StrAppend(&out,
                  "\nUse the tools to explore the database, then call "
                  "submit_final_sql with your answer.");
  return out;
}

absl::StatusOr<RunResult> RunAgentLoop(ChatClient& client, const Skill& skill,
                                       const Instance& instance,
                                       const Budgets& budgets,
                                       const ToolBox& tools,
                                       const AgentLoopOptions& options,
                                       std::optional<uint64_t> seed) {
  DIVSKILL_RETURN_IF_ERROR(budgets.Validate());
  ChatRequest request;
  request.model = options.model;
  request.tools = ToolSchemas();
  request.temperature = budgets.temperature;
  request.max_tokens = budgets.max_completion_tokens;
  request.seed = seed;
  request.messages.push_back({"system", skill.prompt, {}, {}});
  request.messages.push_back(
      {"user", TaskMessage(instance, options.include_schema), {}, {}});

  RunResult result;
  result.termination = Termination::kTurnsExhausted;
  std::string last_draft;
  std::string submitted_sql;
  bool done = false;
  bool nudged = false;
  int recorded_calls = 0;
  int sql_execs = 0;

  for (int turn = 0; turn < budgets.max_turns && !done; ++turn) {
    auto reply = CompleteWithRetry(client, request, options.retry);
    if (!reply.ok()) {
      result.termination = Termination::kTransportFailed;
      result.error = std::string(reply.status().message());
      done = true;
      break;
    }
    ChatMessage message = *std::move(reply);
    message.role = "assistant";
    request.messages.push_back(message);

    const std::string draft = ExtractSqlBlock(message.content);
    if (!draft.empty()) {
      last_draft = draft;
      result.log.push_back({trajectory::ToolEvent::Kind::kDraft, "", draft, false});
    }
    if (message.tool_calls.empty()) {
      result.termination = Termination::kNoAnswer;
      done = true;
      break;
    }
    for (const ToolCall& call : message.tool_calls) {
      if (done) {
        request.messages.push_back(ToolMessage(call, "episode ended"));
        continue;
      }
      if (recorded_calls >= budgets.max_turns) {
        result.termination = Termination::kTurnsExhausted;
        request.messages.push_back(ToolMessage(call, "tool budget exhausted"));
        done = true;
        continue;
      }
      if (call.name == "execute_sql" && sql_execs >= budgets.max_sql_execs) {
        result.termination = Termination::kExecsExhausted;
        request.messages.push_back(ToolMessage(call, "execution budget exhausted"));
        done = true;
        continue;
      }
      auto dispatched = tools.Dispatch(call, instance);
      if (!dispatched.ok()) {
        std::string text = absl::StrCat("error: ", dispatched.status().message());
        if (KindOf(dispatched.status()) == ErrorKind::kMalformedToolCall && !nudged) {
          nudged = true;
          absl::StrAppend(&text,
                          "\nRe-issue the call with arguments as a JSON object "
                          "matching the tool schema.");
        }
        request.messages.push_back(ToolMessage(call, std::move(text)));
        continue;
      }
      ++recorded_calls;
      if (call.name == "execute_sql") ++sql_execs;
      result.log.push_back(dispatched->event);
      request.messages.push_back(ToolMessage(call, dispatched->content));
      if (dispatched->submitted) {
        submitted_sql = dispatched->event.sql;
        result.termination = Termination::kSubmitted;
        done = true;
      }
    }
  }

  auto traj = trajectory::ExtractActions(result.log, skill.skill_id,
                                         instance.instance_id);
  if (!traj.ok()) return traj.status();
  result.trajectory = *std::move(traj);
  result.sql = result.termination == Termination::kSubmitted ? submitted_sql : last_draft;
  if (result.sql.empty()) {
    if (result.error.empty()) {
      result.error = absl::StrCat("no SQL produced (",
                                  std::string(TerminationName(result.termination)), ")");
    }
  } else {
    result.execution = exec::ExecuteSql(instance.db_ref, result.sql, options.limits);
  }
  return result;
}

absl::StatusOr<RunResult> LlmAgentExecutor::Run(const Skill& skill,
                                                const Instance& instance,
                                                const Budgets& budgets,
                                                uint64_t seed) {
  std::unique_ptr<ChatClient> client = factory_();
  if (client == nullptr) {
    return MakeError(ErrorKind::kConfigError, "chat client factory returned null");
  }
  return RunAgentLoop(*client, skill, instance, budgets, tools_, options_, seed);
}

}  // namespace divskill::agents
