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


// Run configuration. A TOML file is converted to JSON, an optional JSON
// merge-patch from `--set` is applied, and the result is validated with
// unknown sections and keys rejected. Relative paths resolve against the
// directory of the config file.
//
//   [run]        K T b n_eval max_prompt_len rng_seed rotation_stride jobs
//   [budgets]    max_turns max_sql_execs max_completion_tokens temperature
//   [match]      row_order_sensitive float_sig_digits null_token
//   [exec]       timeout_s max_rows gold_cache_dir
//   [llm]        base_url model judge_model optimizer_model max_attempts
//                initial_backoff_ms timeout_s judge_max_attempts
//   [paths]      seed_pool docs_dir patterns_dir templates_dir
//   [screen]     dialect_denylist
//   [synthetic]  noise

#ifndef DIVSKILL_PIPELINE_CONFIG_H_
#define DIVSKILL_PIPELINE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>

#include "absl/status/statusor.h"
#include "agents/executor.h"
#include "exec/canonical.h"
#include "exec/sqlite_runner.h"
#include "json.hpp"

namespace divskill::pipeline {

struct LlmSettings {
  std::string base_url;
  std::string model;
  std::string judge_model;      // defaults to model
  std::string optimizer_model;  // defaults to model
  int max_attempts = 3;
  int initial_backoff_ms = 500;
  int timeout_s = 120;
  int judge_max_attempts = 2;
};

struct CliConfig {
  std::optional<int> K;
  int T = 1;
  int b = 1;
  int n_eval = 1;
  size_t max_prompt_len = 12000;
  std::optional<uint64_t> rng_seed;
  std::optional<int> rotation_stride;
  int jobs = 1;

  agents::Budgets budgets;
  exec::MatchPolicy match;
  exec::ExecLimits limits;
  std::optional<std::filesystem::path> gold_cache_dir;
  LlmSettings llm;

  std::optional<std::filesystem::path> seed_pool;
  std::filesystem::path docs_dir;
  std::filesystem::path patterns_dir;
  std::filesystem::path templates_dir;

  std::optional<std::set<std::string>> dialect_denylist;
  double synthetic_noise = 0.0;

  absl::Status Validate() const;
};

// TOML text to a JSON object (tables -> objects, arrays -> arrays).
absl::StatusOr<nlohmann::json> TomlToJson(const std::string& text,
                                          const std::string& source = "config");

// ConfigError on unknown keys, wrong types or invalid values.
absl::StatusOr<CliConfig> ConfigFromJson(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir);

// Reads `path` (empty = defaults only) and applies `overrides` as a JSON
// merge-patch.
absl::StatusOr<CliConfig> LoadConfig(const std::filesystem::path& path,
                                     const std::string& overrides = {});

// Effective configuration, for run manifests.
nlohmann::json ConfigToJson(const CliConfig& config);

}  // namespace divskill::pipeline

#endif  // DIVSKILL_PIPELINE_CONFIG_H_
