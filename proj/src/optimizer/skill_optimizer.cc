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


#include "optimizer/skill_optimizer.h"

#include <cctype>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "agents/synthetic.h"
#include "core/errors.h"
#include "exec/sqlite_runner.h"
#include "glog/logging.h"

namespace divskill::optimizer {
namespace {

constexpr char kReflectionSystem[] =
    "You improve a strategy document (a \"skill\") that guides a Text-to-SQL "
    "agent. You are shown the current skill and runs where it failed. Revise "
    "the skill so the agent avoids these failure modes in general. Do not "
    "mention specific tables, columns, values, questions or databases, and do "
    "not use syntax specific to one SQL dialect. Keep it concise. Reply with "
    "the complete revised skill inside one fenced block.";

std::string FencedBody(const std::string& text) {
  const size_t open = text.find("```");
  if (open == std::string::npos) return std::string(absl::StripAsciiWhitespace(text));
  const size_t line_end = text.find('\n', open);
  if (line_end == std::string::npos) return {};
  const size_t close = text.find("```", line_end);
  if (close == std::string::npos) return {};
  return std::string(
      absl::StripAsciiWhitespace(text.substr(line_end + 1, close - line_end - 1)));
}

}  // namespace

absl::StatusOr<std::string> MutationOptimizer::Optimize(
    const std::string& prompt, const std::vector<agents::FailureTrace>& failures) {
  return agents::MutateSkill(prompt, failures);
}

std::string ReflectionPrompt(const std::string& prompt,
                             const std::vector<agents::FailureTrace>& failures,
                             size_t max_failures_shown) {
  std::string out = absl::StrCat("Current skill:\n```\n", prompt, "\n```\n\nFailed runs (",
                                 failures.size(), " total):\n");
  const size_t shown = std::min(max_failures_shown, failures.size());
  for (size_t i = 0; i < shown; ++i) {
    const agents::FailureTrace& f = failures[i];
    std::vector<std::string> actions;
    for (trajectory::Action a : f.trajectory.actions) {
      actions.emplace_back(trajectory::ActionName(a));
    }
    absl::StrAppend(&out, "\n", i + 1, ". Question: ", f.instance.question,
                    "\n   Actions: ", absl::StrJoin(actions, " -> "),
                    "\n   Outcome: ", f.error_summary, "\n");
  }
  return out;
}

absl::StatusOr<std::string> LlmSkillOptimizer::Optimize(
    const std::string& prompt, const std::vector<agents::FailureTrace>& failures) {
  if (failures.empty()) {
    return MakeError(ErrorKind::kNoFailures, "nothing to learn from");
  }
  std::unique_ptr<agents::ChatClient> client = factory_();
  if (client == nullptr) {
    return MakeError(ErrorKind::kConfigError, "chat client factory returned null");
  }
  agents::ChatRequest request;
  request.model = options_.model;
  request.temperature = options_.temperature;
  request.max_tokens = options_.max_tokens;
  request.messages = {
      {"system", kReflectionSystem, {}, {}},
      {"user", ReflectionPrompt(prompt, failures, options_.max_failures_shown), {}, {}}};
  DIVSKILL_ASSIGN_OR_RETURN(agents::ChatMessage reply,
                            agents::CompleteWithRetry(*client, request, options_.retry));
  std::string proposal = FencedBody(reply.content);
  if (proposal.empty()) {
    return MakeError(ErrorKind::kOptimizerFailure, "optimizer reply contained no skill");
  }
  return proposal;
}

const std::set<std::string>& DefaultDialectDenylist() {
  static const std::set<std::string> words = {
      "qualify",      "flatten",   "iff",           "nvl",        "nvl2",
      "zeroifnull",   "ilike",     "try_to_number", "to_varchar", "safe_cast",
      "safe_divide",  "unnest",    "struct",        "julianday",  "strftime",
      "group_concat", "listagg",   "array_agg",     "ifnull",     "date_diff",
      "datediff",     "dateadd",   "timestampdiff", "to_char",    "regexp_substr"};
  return words;
}

LexicalScreen::LexicalScreen(std::set<std::string> identifiers,
                             std::set<std::string> denylist)
    : identifiers_(std::move(identifiers)), denylist_() {
  for (const std::string& w : denylist) denylist_.insert(absl::AsciiStrToLower(w));
  std::set<std::string> lowered;
  for (const std::string& w : identifiers_) lowered.insert(absl::AsciiStrToLower(w));
  identifiers_ = std::move(lowered);
}

LexicalScreen LexicalScreen::ForBatch(const std::vector<Instance>& batch,
                                      const std::set<std::string>& denylist) {
  std::set<std::string> identifiers;
  std::set<std::string> seen_dbs;
  for (const Instance& inst : batch) {
    if (!seen_dbs.insert(inst.db_ref).second) continue;
    auto ids = exec::SchemaIdentifiers(inst.db_ref);
    if (!ids.ok()) {
      LOG(WARNING) << "no schema identifiers for " << inst.db_ref << ": " << ids.status();
      continue;
    }
    identifiers.insert(ids->begin(), ids->end());
  }
  return LexicalScreen(std::move(identifiers), denylist);
}

std::optional<std::string> LexicalScreen::Violation(const std::string& proposal) const {
  std::string word;
  auto check = [&]() -> bool {
    if (word.empty()) return false;
    const bool hit = identifiers_.count(word) || denylist_.count(word);
    if (!hit) word.clear();
    return hit;
  };
  for (char c : proposal) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '_') {
      word.push_back(static_cast<char>(std::tolower(u)));
    } else if (check()) {
      return word;
    }
  }
  if (check()) return word;
  return std::nullopt;
}

}  // namespace divskill::optimizer
