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


#ifndef DIVSKILL_OPTIMIZER_SKILL_OPTIMIZER_H_
#define DIVSKILL_OPTIMIZER_SKILL_OPTIMIZER_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "agents/agent_loop.h"
#include "agents/executor.h"
#include "core/types.h"

namespace divskill::optimizer {

// Proposes a revised prompt from the failures of the current one. Proposals
// must stay free of instance identifiers and dialect-specific syntax; the
// engine screens them lexically.
class SkillOptimizer {
 public:
  virtual ~SkillOptimizer() = default;
  virtual absl::StatusOr<std::string> Optimize(
      const std::string& prompt,
      const std::vector<agents::FailureTrace>& failures) = 0;
};

// Synthetic-family optimizer: adds the most frequently unmet capability.
class MutationOptimizer : public SkillOptimizer {
 public:
  absl::StatusOr<std::string> Optimize(
      const std::string& prompt,
      const std::vector<agents::FailureTrace>& failures) override;
};

struct LlmOptimizerOptions {
  std::string model;
  double temperature = 0.7;
  int max_tokens = 16000;
  size_t max_failures_shown = 8;
  agents::RetryPolicy retry;
};

// One reflect-and-rewrite call per position. The revised skill is read from
// the first fenced block of the reply, or the whole reply if there is none.
class LlmSkillOptimizer : public SkillOptimizer {
 public:
  LlmSkillOptimizer(agents::ChatClientFactory factory, LlmOptimizerOptions options)
      : factory_(std::move(factory)), options_(std::move(options)) {}
  absl::StatusOr<std::string> Optimize(
      const std::string& prompt,
      const std::vector<agents::FailureTrace>& failures) override;

 private:
  agents::ChatClientFactory factory_;
  LlmOptimizerOptions options_;
};

std::string ReflectionPrompt(const std::string& prompt,
                             const std::vector<agents::FailureTrace>& failures,
                             size_t max_failures_shown);

// Default dialect-keyword denylist for the lexical screen.
const std::set<std::string>& DefaultDialectDenylist();

// Rejects proposals containing any schema identifier of the current batch's
// databases or any denylisted dialect keyword. Matching is on whole words,
// case-insensitive.
class LexicalScreen {
 public:
  LexicalScreen() = default;
  LexicalScreen(std::set<std::string> identifiers, std::set<std::string> denylist);

  // Databases that cannot be opened contribute no identifiers.
  static LexicalScreen ForBatch(const std::vector<Instance>& batch,
                                const std::set<std::string>& denylist);

  // First offending word, if any.
  std::optional<std::string> Violation(const std::string& proposal) const;
  const std::set<std::string>& identifiers() const { return identifiers_; }

 private:
  std::set<std::string> identifiers_;
  std::set<std::string> denylist_;
};

}  // namespace divskill::optimizer

#endif  // DIVSKILL_OPTIMIZER_SKILL_OPTIMIZER_H_
