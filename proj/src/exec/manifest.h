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

#ifndef DIVSKILL_EXEC_MANIFEST_H_
#define DIVSKILL_EXEC_MANIFEST_H_

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "core/types.h"
#include "exec/sqlite_runner.h"
#include "json.hpp"

namespace divskill::exec {

// Dataset manifests are JSONL, one instance per line:
//   {"id", "question", "db", "gold_sql"?, "gold_result"?, "dialect"}
// Relative `db` paths resolve against `base_dir` when one is given.
absl::StatusOr<std::vector<Instance>> ParseManifest(
    const std::string& text, const std::filesystem::path& base_dir = {});
absl::StatusOr<std::vector<Instance>> LoadManifest(
    const std::filesystem::path& path);

nlohmann::json InstanceToJson(const Instance& instance);
std::string SerializeManifest(const std::vector<Instance>& instances);

// Resolves gold answers to result tables. Gold SQL runs once per instance; the
// table is memoized and, when a cache directory is set, persisted there as
// <instance_id>.json and reused on later runs. Thread-safe.
class GoldResolver {
 public:
  explicit GoldResolver(ExecLimits limits = {},
                        std::optional<std::filesystem::path> cache_dir = {})
      : limits_(limits), cache_dir_(std::move(cache_dir)) {}

  absl::StatusOr<ResultTable> Resolve(const Instance& instance);

 private:
  ExecLimits limits_;
  std::optional<std::filesystem::path> cache_dir_;
  std::mutex mu_;
  std::map<std::string, ResultTable> memo_;
};

}  // namespace divskill::exec

#endif  // DIVSKILL_EXEC_MANIFEST_H_
