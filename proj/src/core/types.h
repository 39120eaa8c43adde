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

#ifndef DIVSKILL_CORE_TYPES_H_
#define DIVSKILL_CORE_TYPES_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "core/result_table.h"
#include "json.hpp"

namespace divskill {

inline constexpr size_t kDefaultMaxPromptLen = 12000;

enum class SkillOrigin { kSeed, kOptimized };

std::string_view SkillOriginName(SkillOrigin origin);

// A strategy prompt that conditions an agent. Seed skills start at version 0;
// every accepted update bumps the version and records its parent.
struct Skill {
  std::string skill_id;
  std::string prompt;
  int version = 0;
  std::optional<int> parent_version;
  SkillOrigin origin = SkillOrigin::kSeed;

  absl::Status Validate(size_t max_prompt_len = kDefaultMaxPromptLen) const;
  friend bool operator==(const Skill&, const Skill&) = default;
};

// Ordered, fixed-size collection of skills with distinct ids.
class SkillPool {
 public:
  static absl::StatusOr<SkillPool> Create(
      std::vector<Skill> skills, size_t max_prompt_len = kDefaultMaxPromptLen);

  size_t size() const { return skills_.size(); }
  const std::vector<Skill>& skills() const { return skills_; }
  const Skill& at(size_t i) const { return skills_.at(i); }

  // Index of `skill_id` in pool order.
  absl::StatusOr<size_t> IndexOf(std::string_view skill_id) const;

  // Replaces the prompt of skill `index` and records the lineage step.
  void CommitUpdate(size_t index, std::string prompt);

  friend bool operator==(const SkillPool&, const SkillPool&) = default;

 private:
  explicit SkillPool(std::vector<Skill> skills) : skills_(std::move(skills)) {}
  std::vector<Skill> skills_;
};

enum class Dialect { kSqlite, kSnowflake, kBigQuery, kPostgres, kGeneric };

std::string_view DialectName(Dialect dialect);
absl::StatusOr<Dialect> ParseDialect(std::string_view name);

// Either a reference SQL query (run on demand) or a frozen reference table.
struct GoldSpec {
  std::optional<std::string> sql;
  std::optional<ResultTable> result;
  friend bool operator==(const GoldSpec&, const GoldSpec&) = default;
};

// One Text-to-SQL task.
struct Instance {
  std::string instance_id;
  std::string question;
  std::string db_ref;
  GoldSpec gold;
  Dialect dialect = Dialect::kSqlite;

  absl::Status Validate() const;
  friend bool operator==(const Instance&, const Instance&) = default;
};

nlohmann::json SkillToJson(const Skill& skill);
absl::StatusOr<Skill> SkillFromJson(const nlohmann::json& j);

// {"skills": [...], "k": K}
nlohmann::json SkillPoolToJson(const SkillPool& pool);
absl::StatusOr<SkillPool> SkillPoolFromJson(
    const nlohmann::json& j, size_t max_prompt_len = kDefaultMaxPromptLen);

}  // namespace divskill

#endif  // DIVSKILL_CORE_TYPES_H_
