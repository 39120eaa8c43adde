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


#include "selection/judges.h"

#include <regex>

#include "absl/strings/str_cat.h"
#include "core/errors.h"

namespace divskill::selection {

constexpr char kJudgeSystem[] =
    "You compare two candidate SQL queries that answer the same question. "
    "Pick the one whose result is more likely to be exactly correct. "
    "Reply with a single letter: A or B.";

bool OracleJudge::Correct(const JudgeCandidate& candidate) const {
  return candidate.outcome != nullptr && !exec::IsError(*candidate.outcome) &&
         exec::ResultsMatch(std::get<ResultTable>(*candidate.outcome), gold_, policy_);
}

absl::StatusOr<Side> OracleJudge::Compare(const JudgeRequest& request) {
  if (!Correct(request.a) && Correct(request.b)) return Side::kB;
  return Side::kA;
}

std::string JudgePrompt(const JudgeRequest& r) {
  return absl::StrCat("Question: ", r.question, "\n\nSchema:\n", r.schema_summary,
                      "\n\nCandidate A SQL:\n", r.a.sql, "\nCandidate A result:\n",
                      r.a.preview, "\n\nCandidate B SQL:\n", r.b.sql,
                      "\nCandidate B result:\n", r.b.preview,
                      "\n\nWhich candidate is correct? Answer A or B.");
}

absl::StatusOr<Side> ParseVerdict(const std::string& reply) {
  static const std::regex re(R"((^|[^A-Za-z0-9_])([AB])($|[^A-Za-z0-9_]))");
  std::smatch m;
  if (std::regex_search(reply, m, re)) {
    return m[2].str() == "A" ? Side::kA : Side::kB;
  }
  return MakeError(ErrorKind::kJudgeFailure,
                   absl::StrCat("no verdict in reply: ", reply.substr(0, 200)));
}

absl::StatusOr<Side> LlmJudge::Compare(const JudgeRequest& request) {
  std::unique_ptr<agents::ChatClient> client = factory_();
  if (client == nullptr) {
    return MakeError(ErrorKind::kConfigError, "chat client factory returned null");
  }
  agents::ChatRequest chat;
  chat.model = options_.model;
  chat.temperature = options_.temperature;
  chat.max_tokens = options_.max_tokens;
  chat.messages = {{"system", kJudgeSystem, {}, {}},
                   {"user", JudgePrompt(request), {}, {}}};
  auto reply = agents::CompleteWithRetry(*client, chat, options_.retry);
  if (!reply.ok()) {
    return MakeError(ErrorKind::kJudgeFailure, std::string(reply.status().message()));
  }
  return ParseVerdict(reply->content);
}

}  // namespace divskill::selection
