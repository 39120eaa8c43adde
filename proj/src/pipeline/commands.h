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


// Subcommand implementations. Each returns a JSON report (also what the CLI
// prints) and writes a run manifest naming its inputs with their SHA-256,
// the effective configuration and the seeds used.

#ifndef DIVSKILL_PIPELINE_COMMANDS_H_
#define DIVSKILL_PIPELINE_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "agents/executor.h"
#include "core/types.h"
#include "json.hpp"
#include "pipeline/config.h"

namespace divskill::pipeline {

enum class ExecutorKind { kSim, kLlm };
enum class OptimizerKind { kMutate, kLlm };
enum class JudgeKind { kOracle, kLlm };

absl::StatusOr<ExecutorKind> ParseExecutorKind(const std::string& s);
absl::StatusOr<OptimizerKind> ParseOptimizerKind(const std::string& s);
absl::StatusOr<JudgeKind> ParseJudgeKind(const std::string& s);

struct CommonArgs {
  std::filesystem::path config;  // empty = defaults
  std::string overrides;         // JSON merge-patch
  std::optional<int> jobs;       // global cap; overrides run.jobs
};

struct OptimizeArgs {
  CommonArgs common;
  std::filesystem::path train;
  std::optional<std::filesystem::path> seed_pool;  // overrides paths.seed_pool
  ExecutorKind executor = ExecutorKind::kSim;
  OptimizerKind optimizer = OptimizerKind::kMutate;
  std::filesystem::path out_dir;
};

struct InferArgs {
  CommonArgs common;
  std::filesystem::path pool;  // run directory or pool JSON file
  std::filesystem::path dataset;
  ExecutorKind executor = ExecutorKind::kSim;
  JudgeKind judge = JudgeKind::kOracle;
  std::filesystem::path out;  // selections.jsonl; siblings get candidates
                              // and trajectories
};

struct EvaluateArgs {
  CommonArgs common;
  std::filesystem::path selections;
  std::filesystem::path dataset;
  std::optional<std::filesystem::path> candidates;
  std::optional<std::filesystem::path> out;
};

struct VerifyGreedyArgs {
  int skills = 6;
  int instances = 20;
  int k = 3;
  int trials = 50;
  uint64_t seed = 0;
  std::optional<std::filesystem::path> out;
};

struct AnalyzeArgs {
  std::filesystem::path runs;  // directory with trajectories.jsonl, or a file
  std::optional<std::filesystem::path> out;
};

struct SimulateArgs {
  std::filesystem::path out_dir;
  uint64_t seed = 0;
  int capabilities = 3;
  int train = 60;
  int heldout = 40;
  double noise = 0.1;
  int T = 3;
  int b = 20;
};

absl::StatusOr<nlohmann::json> RunOptimizeCommand(const OptimizeArgs& args);
absl::StatusOr<nlohmann::json> RunInferCommand(const InferArgs& args);
absl::StatusOr<nlohmann::json> RunEvaluateCommand(const EvaluateArgs& args);
absl::StatusOr<nlohmann::json> RunVerifyGreedyCommand(const VerifyGreedyArgs& args);
absl::StatusOr<nlohmann::json> RunAnalyzeCommand(const AnalyzeArgs& args);
absl::StatusOr<nlohmann::json> RunSimulateCommand(const SimulateArgs& args);

// Executor for the configured kind; the LLM kind needs llm.base_url,
// llm.model and DIVSKILL_LLM_KEY.
absl::StatusOr<std::unique_ptr<agents::Executor>> MakeExecutor(ExecutorKind kind,
                                                               const CliConfig& config);

absl::StatusOr<SkillPool> LoadPool(const std::filesystem::path& path,
                                   size_t max_prompt_len);

// {"path": ..., "sha256": ...}
absl::StatusOr<nlohmann::json> DescribeInput(const std::filesystem::path& path);

}  // namespace divskill::pipeline

#endif  // DIVSKILL_PIPELINE_COMMANDS_H_
