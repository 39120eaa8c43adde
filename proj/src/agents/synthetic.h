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

// Deterministic stand-in for an LLM agent. A skill's strategy coverage is
// written into its prompt as `cap:<x>` tokens and an instance's needs into its
// question as `req:<x>` tokens, with <x> drawn from the letters a-z. A run
// succeeds iff the skill covers every requirement, then fails independently
// with probability `noise`. The produced SQL is executed for real, so the
// rest of the pipeline (gold matching, dedup) is the same code the LLM path
// uses.

#ifndef DIVSKILL_AGENTS_SYNTHETIC_H_
#define DIVSKILL_AGENTS_SYNTHETIC_H_

#include <bitset>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "agents/executor.h"
#include "exec/sqlite_runner.h"

namespace divskill::agents {

inline constexpr size_t kCapabilityAlphabetSize = 26;
using CapabilitySet = std::bitset<kCapabilityAlphabetSize>;

CapabilitySet ParseCapabilities(std::string_view prompt);
CapabilitySet ParseRequirements(std::string_view question);
std::string CapabilityString(const CapabilitySet& caps);  // e.g. "abd"

struct SyntheticSkill {
  CapabilitySet capabilities;
  double noise = 0.0;  // in [0, 1)
};

absl::StatusOr<SyntheticSkill> ParseSyntheticSkill(const Skill& skill,
                                                   double noise);

// SQL that reproduces `table` as literals (no blob cells).
absl::StatusOr<std::string> LiteralSelect(const ResultTable& table);

RunResult SimulatedExecute(const Skill& skill, const Instance& instance,
                           double noise, std::mt19937_64& rng,
                           const exec::ExecLimits& limits = {});

class SyntheticExecutor : public Executor {
 public:
  explicit SyntheticExecutor(double noise, exec::ExecLimits limits = {})
      : noise_(noise), limits_(limits) {}

  absl::StatusOr<RunResult> Run(const Skill& skill, const Instance& instance,
                                const Budgets& budgets, uint64_t seed) override;

 private:
  double noise_;
  exec::ExecLimits limits_;
};

// Adds one `cap:<x>` token for the capability that is most often unmet among
// the failed instances (ties go to the earliest letter). Capabilities are never
// removed. Returns the prompt unchanged when every failure was noise.
absl::StatusOr<std::string> MutateSkill(const std::string& prompt,
                                        const std::vector<FailureTrace>& failures);

}  // namespace divskill::agents

#endif  // DIVSKILL_AGENTS_SYNTHETIC_H_
