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

#include "core/types.h"

#include <set>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "core/errors.h"

namespace divskill {

std::string_view SkillOriginName(SkillOrigin origin) {
  return origin == SkillOrigin::kSeed ? "seed" : "optimized";
}

absl::Status Skill::Validate(size_t max_prompt_len) const {
  if (skill_id.empty()) {
    return MakeError(ErrorKind::kInvalidArgument, "skill_id is empty");
  }
  if (prompt.empty()) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("skill ", skill_id, " has an empty prompt"));
  }
  if (prompt.size() > max_prompt_len) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("skill ", skill_id, " prompt has ",
                                  prompt.size(), " chars, limit ",
                                  max_prompt_len));
  }
  if (version < 0) {
    return MakeError(ErrorKind::kInvalidArgument, "negative skill version");
  }
  if (origin == SkillOrigin::kSeed && version != 0) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("seed skill ", skill_id, " must be version 0"));
  }
  if (parent_version.has_value() && *parent_version >= version) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("skill ", skill_id,
                                  " version must exceed its parent"));
  }
  return absl::OkStatus();
}

absl::StatusOr<SkillPool> SkillPool::Create(std::vector<Skill> skills,
                                            size_t max_prompt_len) {
  if (skills.empty()) {
    return MakeError(ErrorKind::kInvalidArgument, "skill pool is empty");
  }
  std::set<std::string> seen;
  for (const Skill& s : skills) {
    DIVSKILL_RETURN_IF_ERROR(s.Validate(max_prompt_len));
    if (!seen.insert(s.skill_id).second) {
      return MakeError(ErrorKind::kDuplicateId,
                       absl::StrCat("duplicate skill_id ", s.skill_id));
    }
  }
  return SkillPool(std::move(skills));
}

absl::StatusOr<size_t> SkillPool::IndexOf(std::string_view skill_id) const {
  for (size_t i = 0; i < skills_.size(); ++i) {
    if (skills_[i].skill_id == skill_id) return i;
  }
  return MakeError(ErrorKind::kUnknownId,
                   absl::StrCat("skill ", std::string(skill_id), " is not in the pool"));
}

void SkillPool::CommitUpdate(size_t index, std::string prompt) {
  Skill& s = skills_.at(index);
  s.parent_version = s.version;
  s.version += 1;
  s.prompt = std::move(prompt);
  s.origin = SkillOrigin::kOptimized;
}

std::string_view DialectName(Dialect dialect) {
  switch (dialect) {
    case Dialect::kSqlite:
      return "sqlite";
    case Dialect::kSnowflake:
      return "snowflake";
    case Dialect::kBigQuery:
      return "bigquery";
    case Dialect::kPostgres:
      return "postgres";
    case Dialect::kGeneric:
      return "generic";
  }
  return "generic";
}

absl::StatusOr<Dialect> ParseDialect(std::string_view name) {
  const std::string lower = absl::AsciiStrToLower(std::string(name));
  for (Dialect d : {Dialect::kSqlite, Dialect::kSnowflake, Dialect::kBigQuery,
                    Dialect::kPostgres, Dialect::kGeneric}) {
    if (DialectName(d) == lower) return d;
  }
  return MakeError(ErrorKind::kParseError,
                   absl::StrCat("unknown dialect '", std::string(name), "'"));
}

absl::Status Instance::Validate() const {
  if (instance_id.empty()) {
    return MakeError(ErrorKind::kParseError, "instance id is empty");
  }
  if (gold.sql.has_value() == gold.result.has_value()) {
    return MakeError(ErrorKind::kParseError,
                     absl::StrCat("instance ", instance_id,
                                  " needs exactly one of gold_sql and "
                                  "gold_result"));
  }
  if (gold.sql.has_value() && gold.sql->empty()) {
    return MakeError(ErrorKind::kParseError,
                     absl::StrCat("instance ", instance_id, " has empty gold_sql"));
  }
  return absl::OkStatus();
}

nlohmann::json SkillToJson(const Skill& skill) {
  nlohmann::json j = {{"skill_id", skill.skill_id},
                      {"prompt", skill.prompt},
                      {"version", skill.version},
                      {"origin", std::string(SkillOriginName(skill.origin))}};
  j["parent_version"] = skill.parent_version.has_value()
                            ? nlohmann::json(*skill.parent_version)
                            : nlohmann::json(nullptr);
  return j;
}

absl::StatusOr<Skill> SkillFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("skill_id") || !j.contains("prompt") ||
      !j["skill_id"].is_string() || !j["prompt"].is_string()) {
    return MakeError(ErrorKind::kParseError,
                     "skill needs string 'skill_id' and 'prompt'");
  }
  Skill s;
  s.skill_id = j["skill_id"].get<std::string>();
  s.prompt = j["prompt"].get<std::string>();
  if (j.contains("version")) {
    if (!j["version"].is_number_integer()) {
      return MakeError(ErrorKind::kParseError, "skill version must be an int");
    }
    s.version = j["version"].get<int>();
  }
  if (j.contains("parent_version") && !j["parent_version"].is_null()) {
    if (!j["parent_version"].is_number_integer()) {
      return MakeError(ErrorKind::kParseError,
                       "parent_version must be an int or null");
    }
    s.parent_version = j["parent_version"].get<int>();
  }
  const std::string origin = j.value("origin", std::string("seed"));
  if (origin == "seed") {
    s.origin = SkillOrigin::kSeed;
  } else if (origin == "optimized") {
    s.origin = SkillOrigin::kOptimized;
  } else {
    return MakeError(ErrorKind::kParseError,
                     absl::StrCat("unknown skill origin '", origin, "'"));
  }
  return s;
}

nlohmann::json SkillPoolToJson(const SkillPool& pool) {
  nlohmann::json skills = nlohmann::json::array();
  for (const Skill& s : pool.skills()) skills.push_back(SkillToJson(s));
  return {{"skills", std::move(skills)}, {"k", pool.size()}};
}

absl::StatusOr<SkillPool> SkillPoolFromJson(const nlohmann::json& j,
                                            size_t max_prompt_len) {
  if (!j.is_object() || !j.contains("skills") || !j["skills"].is_array()) {
    return MakeError(ErrorKind::kParseError, "pool needs a 'skills' array");
  }
  std::vector<Skill> skills;
  for (const auto& item : j["skills"]) {
    DIVSKILL_ASSIGN_OR_RETURN(Skill s, SkillFromJson(item));
    skills.push_back(std::move(s));
  }
  if (j.contains("k")) {
    if (!j["k"].is_number_unsigned() || j["k"].get<size_t>() != skills.size()) {
      return MakeError(ErrorKind::kParseError,
                       "pool 'k' must equal the number of skills");
    }
  }
  return SkillPool::Create(std::move(skills), max_prompt_len);
}

}  // namespace divskill
