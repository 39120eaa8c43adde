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


#ifndef DIVSKILL_SELECTION_JUDGES_H_
#define DIVSKILL_SELECTION_JUDGES_H_

#include <string>

#include "agents/agent_loop.h"
#include "core/result_table.h"
#include "exec/canonical.h"
#include "selection/selection.h"

namespace divskill::selection {

// Knows the gold result: prefers a candidate whose result matches it, and
// otherwise answers A. Stateless, so safe to share across threads.
class OracleJudge : public JudgeInterface {
 public:
  explicit OracleJudge(ResultTable gold, exec::MatchPolicy policy = {})
      : gold_(std::move(gold)), policy_(std::move(policy)) {}
  absl::StatusOr<Side> Compare(const JudgeRequest& request) override;
  bool Correct(const JudgeCandidate& candidate) const;

 private:
  ResultTable gold_;
  exec::MatchPolicy policy_;
};

struct LlmJudgeOptions {
  std::string model;
  double temperature = 0.0;
  int max_tokens = 1024;
  agents::RetryPolicy retry;
};

// Shows the question, schema, both SQL texts and result previews, and reads
// the verdict from the first standalone "A" or "B" in the reply.
class LlmJudge : public JudgeInterface {
 public:
  LlmJudge(agents::ChatClientFactory factory, LlmJudgeOptions options)
      : factory_(std::move(factory)), options_(std::move(options)) {}
  absl::StatusOr<Side> Compare(const JudgeRequest& request) override;

 private:
  agents::ChatClientFactory factory_;
  LlmJudgeOptions options_;
};

std::string JudgePrompt(const JudgeRequest& request);
// JudgeFailure when the reply names neither side.
absl::StatusOr<Side> ParseVerdict(const std::string& reply);

}  // namespace divskill::selection

#endif  // DIVSKILL_SELECTION_JUDGES_H_
