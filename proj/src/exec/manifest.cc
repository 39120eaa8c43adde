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

#include "exec/manifest.h"

#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "core/errors.h"
#include "core/util.h"

namespace divskill::exec {
namespace {

absl::Status LineError(int line_no, std::string_view what) {
  return MakeError(ErrorKind::kParseError,
                   absl::StrCat("manifest line ", line_no, ": ", std::string(what)));
}

absl::StatusOr<Instance> ParseRow(const nlohmann::json& j, int line_no,
                                  const std::filesystem::path& base_dir) {
  if (!j.is_object()) return LineError(line_no, "row is not an object");
  for (const char* key : {"id", "question", "db"}) {
    if (!j.contains(key) || !j[key].is_string()) {
      return LineError(line_no, absl::StrCat("missing string field '", key, "'"));
    }
  }
  static const std::set<std::string> kKnown = {
      "id", "question", "db", "gold_sql", "gold_result", "dialect"};
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.contains(key)) {
      return LineError(line_no, absl::StrCat("unknown field '", key, "'"));
    }
  }
  Instance inst;
  inst.instance_id = j["id"].get<std::string>();
  inst.question = j["question"].get<std::string>();
  inst.db_ref = j["db"].get<std::string>();
  if (!base_dir.empty() && inst.db_ref != ":memory:" &&
      std::filesystem::path(inst.db_ref).is_relative()) {
    inst.db_ref = (base_dir / inst.db_ref).lexically_normal().string();
  }
  if (j.contains("gold_sql") && !j["gold_sql"].is_null()) {
    if (!j["gold_sql"].is_string()) {
      return LineError(line_no, "gold_sql must be a string");
    }
    inst.gold.sql = j["gold_sql"].get<std::string>();
  }
  if (j.contains("gold_result") && !j["gold_result"].is_null()) {
    auto table = ResultTableFromJson(j["gold_result"]);
    if (!table.ok()) {
      return LineError(line_no, std::string(table.status().message()));
    }
    inst.gold.result = *std::move(table);
  }
  const std::string dialect = j.value("dialect", std::string("sqlite"));
  auto parsed = ParseDialect(dialect);
  if (!parsed.ok()) return LineError(line_no, std::string(parsed.status().message()));
  inst.dialect = *parsed;
  absl::Status valid = inst.Validate();
  if (!valid.ok()) return LineError(line_no, std::string(valid.message()));
  return inst;
}

// Instance ids are free-form tokens; keep the file name portable.
std::string CacheFileName(const std::string& instance_id) {
  std::string safe;
  for (char c : instance_id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    safe.push_back(ok ? c : '_');
  }
  if (safe != instance_id || safe.empty() || safe[0] == '.') {
    safe = absl::StrCat(safe, "-", Sha256Hex(instance_id).substr(0, 12));
  }
  return absl::StrCat(safe, ".json");
}

}  // namespace

absl::StatusOr<std::vector<Instance>> ParseManifest(
    const std::string& text, const std::filesystem::path& base_dir) {
  std::vector<Instance> out;
  std::set<std::string> ids;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) return LineError(line_no, "invalid JSON");
    DIVSKILL_ASSIGN_OR_RETURN(Instance inst, ParseRow(j, line_no, base_dir));
    if (!ids.insert(inst.instance_id).second) {
      return MakeError(ErrorKind::kDuplicateId,
                       absl::StrCat("manifest line ", line_no,
                                    ": duplicate id ", inst.instance_id));
    }
    out.push_back(std::move(inst));
  }
  return out;
}

absl::StatusOr<std::vector<Instance>> LoadManifest(
    const std::filesystem::path& path) {
  DIVSKILL_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  auto parsed = ParseManifest(text, path.parent_path());
  if (!parsed.ok()) return Annotate(parsed.status(), path.string());
  return parsed;
}

nlohmann::json InstanceToJson(const Instance& inst) {
  nlohmann::json j = {{"id", inst.instance_id},
                      {"question", inst.question},
                      {"db", inst.db_ref},
                      {"dialect", std::string(DialectName(inst.dialect))}};
  if (inst.gold.sql.has_value()) j["gold_sql"] = *inst.gold.sql;
  if (inst.gold.result.has_value()) {
    j["gold_result"] = ResultTableToJson(*inst.gold.result);
  }
  return j;
}

std::string SerializeManifest(const std::vector<Instance>& instances) {
  std::string out;
  for (const Instance& inst : instances) {
    absl::StrAppend(&out, InstanceToJson(inst).dump(), "\n");
  }
  return out;
}

absl::StatusOr<ResultTable> GoldResolver::Resolve(const Instance& instance) {
  if (instance.gold.result.has_value()) return *instance.gold.result;
  if (!instance.gold.sql.has_value()) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("instance ", instance.instance_id,
                                  " has no gold answer"));
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(instance.instance_id);
    if (it != memo_.end()) return it->second;
  }
  std::optional<std::filesystem::path> cache_file;
  if (cache_dir_.has_value()) {
    cache_file = *cache_dir_ / CacheFileName(instance.instance_id);
    if (std::filesystem::exists(*cache_file)) {
      DIVSKILL_ASSIGN_OR_RETURN(std::string text, ReadFile(*cache_file));
      nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
      auto table = ResultTableFromJson(j);
      if (table.ok()) {
        std::lock_guard<std::mutex> lock(mu_);
        memo_.emplace(instance.instance_id, *table);
        return table;
      }
    }
  }
  ExecOutcome outcome = ExecuteSql(instance.db_ref, *instance.gold.sql, limits_);
  if (IsError(outcome)) {
    const ExecError& err = std::get<ExecError>(outcome);
    return MakeError(ErrorKind::kExecutorFailure,
                     absl::StrCat("gold SQL for ", instance.instance_id,
                                  " failed: ", std::string(ExecErrorKindName(err.kind)),
                                  ": ", err.message));
  }
  ResultTable table = std::get<ResultTable>(std::move(outcome));
  if (cache_file.has_value()) {
    DIVSKILL_RETURN_IF_ERROR(
        WriteFile(*cache_file, ResultTableToJson(table).dump()));
  }
  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(instance.instance_id, table);
  return table;
}

}  // namespace divskill::exec
