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


// Batch-sequential residual optimization. For every batch the skills are
// visited in a rotated order; each skill is evaluated and optimized only on
// the instances every earlier skill in the batch failed, and the residual
// shrinks by whatever the kept prompt solves. Accepted prompts are committed
// to the pool when the batch ends.

#ifndef DIVSKILL_OPTIMIZER_ENGINE_H_
#define DIVSKILL_OPTIMIZER_ENGINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "agents/executor.h"
#include "core/outcome_matrix.h"
#include "core/rational.h"
#include "core/types.h"
#include "exec/canonical.h"
#include "exec/manifest.h"
#include "json.hpp"
#include "optimizer/skill_optimizer.h"

namespace divskill::optimizer {

struct RunConfig {
  int K = 0;  // must equal the pool size
  int T = 1;
  int b = 1;
  int n_eval = 1;
  size_t max_prompt_len = kDefaultMaxPromptLen;
  uint64_t rng_seed = 0;
  std::optional<int> rotation_stride;

  absl::Status Validate(size_t pool_size, size_t train_size) const;
};

nlohmann::json RunConfigToJson(const RunConfig& config);

int RotationStride(int K, int T, std::optional<int> stride_override = {});

// Pool indices for batch t (1-based), rotated by ((t - 1) * stride) mod K.
std::vector<size_t> RotationOrdering(int K, int t, int T,
                                     std::optional<int> stride_override = {});

enum class AcceptReason {
  kStrictImprovement,
  kBrevityTiebreak,
  kNotBetter,
  kScreenViolation,
  kTooLong,
  kNoFailures,       // the current prompt solved the whole residual
  kSkipped,          // residual already empty
};

std::string_view AcceptReasonName(AcceptReason reason);

struct AcceptDecision {
  bool accept = false;
  AcceptReason reason = AcceptReason::kNotBetter;
};

// Accept iff new_rate > old_rate, or the rates are equal and the new prompt
// is strictly shorter.
AcceptDecision AcceptUpdate(const std::string& old_prompt,
                            const std::string& new_prompt,
                            const Rational& old_rate, const Rational& new_rate);

struct PositionTrace {
  int position = 0;  // 1-based
  std::string skill_id;
  std::set<std::string> residual_before;
  std::string prompt_before;
  std::optional<std::string> proposed_prompt;
  bool accepted = false;
  AcceptReason reason = AcceptReason::kNotBetter;
  std::optional<Rational> old_rate;
  std::optional<Rational> new_rate;
  std::set<std::string> residual_after;
  std::optional<std::string> screen_violation;
};

struct BatchTrace {
  int batch = 0;  // 1-based
  std::vector<std::string> ordering;   // skill ids in visiting order
  std::vector<std::string> instances;  // batch in sampling order
  std::vector<PositionTrace> positions;
};

nlohmann::json BatchTraceToJson(const BatchTrace& trace);

struct EngineOptions {
  agents::Budgets budgets;
  exec::MatchPolicy match;
  std::set<std::string> dialect_denylist = DefaultDialectDenylist();
  int jobs = 1;
};

struct Engine {
  agents::Executor* executor = nullptr;
  SkillOptimizer* optimizer = nullptr;
  exec::GoldResolver* gold = nullptr;
  EngineOptions options;
};

struct BatchResult {
  SkillPool pool;
  BatchTrace trace;
  OutcomeMatrix outcomes;  // kept-prompt outcomes of this batch
};

// ExecutorFailure and OptimizerFailure carry the batch and position.
absl::StatusOr<BatchResult> RunBatch(const SkillPool& pool,
                                     const std::vector<Instance>& batch, int t,
                                     const RunConfig& config, Engine& engine);

struct RunOutput {
  SkillPool pool;
  std::vector<BatchTrace> traces;
  OutcomeMatrix outcomes;
};

// Batches are drawn with std::mt19937_64(rng_seed): without replacement
// within a batch, independently across batches.
absl::StatusOr<RunOutput> Run(const SkillPool& pool0,
                              const std::vector<Instance>& train,
                              const RunConfig& config, Engine& engine);

std::vector<std::vector<size_t>> SampleBatches(size_t train_size, int T, int b,
                                               uint64_t seed);

// config.json, pool_initial.json, pool_final.json, traces/batch_<t>.json,
// outcomes.jsonl.
absl::Status WriteRunDirectory(const std::filesystem::path& dir,
                               const nlohmann::json& config,
                               const SkillPool& pool0, const RunOutput& output);

// Stable JSON text used for every run artifact.
std::string DumpJson(const nlohmann::json& j);

}  // namespace divskill::optimizer

#endif  // DIVSKILL_OPTIMIZER_ENGINE_H_
