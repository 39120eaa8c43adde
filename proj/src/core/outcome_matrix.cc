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

#include "core/outcome_matrix.h"

#include <algorithm>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "core/errors.h"
#include "glog/logging.h"

namespace divskill {
namespace {

const std::vector<AttemptOutcome>& EmptyAttempts() {
  static const auto* const kEmpty = new std::vector<AttemptOutcome>();
  return *kEmpty;
}

}  // namespace

void OutcomeMatrix::RegisterSkill(const std::string& skill_id) {
  skills_.insert(skill_id);
}

void OutcomeMatrix::RegisterInstance(const std::string& instance_id) {
  instances_.insert(instance_id);
}

bool OutcomeMatrix::HasSkill(const std::string& skill_id) const {
  return skills_.contains(skill_id);
}

bool OutcomeMatrix::HasInstance(const std::string& instance_id) const {
  return instances_.contains(instance_id);
}

absl::Status OutcomeMatrix::Append(const std::string& skill_id,
                                   const std::string& instance_id,
                                   AttemptOutcome outcome) {
  if (!HasSkill(skill_id)) {
    return MakeError(ErrorKind::kUnknownId,
                     absl::StrCat("skill ", skill_id, " is not registered"));
  }
  if (!HasInstance(instance_id)) {
    return MakeError(ErrorKind::kUnknownId, absl::StrCat("instance ",
                                                         instance_id,
                                                         " is not registered"));
  }
  records_[{skill_id, instance_id}].push_back(std::move(outcome));
  return absl::OkStatus();
}

const std::vector<AttemptOutcome>& OutcomeMatrix::Attempts(
    const std::string& skill_id, const std::string& instance_id) const {
  auto it = records_.find({skill_id, instance_id});
  return it == records_.end() ? EmptyAttempts() : it->second;
}

SuccessCount OutcomeMatrix::Count(const std::string& skill_id,
                                  const std::string& instance_id) const {
  SuccessCount count;
  for (const AttemptOutcome& a : Attempts(skill_id, instance_id)) {
    ++count.attempts;
    if (a.success) ++count.successes;
  }
  return count;
}

bool OutcomeMatrix::Solved(const std::string& skill_id,
                           const std::string& instance_id) const {
  const auto& attempts = Attempts(skill_id, instance_id);
  return std::any_of(attempts.begin(), attempts.end(),
                     [](const AttemptOutcome& a) { return a.success; });
}

void OutcomeMatrix::Merge(const OutcomeMatrix& other) {
  skills_.insert(other.skills_.begin(), other.skills_.end());
  instances_.insert(other.instances_.begin(), other.instances_.end());
  for (const auto& [key, attempts] : other.records_) {
    auto& dst = records_[key];
    dst.insert(dst.end(), attempts.begin(), attempts.end());
  }
}

absl::StatusOr<OutcomeMatrix> RecordOutcome(const OutcomeMatrix& matrix,
                                            const std::string& skill_id,
                                            const std::string& instance_id,
                                            bool success) {
  OutcomeMatrix next = matrix;
  DIVSKILL_RETURN_IF_ERROR(
      next.Append(skill_id, instance_id, AttemptOutcome{success, std::nullopt, std::nullopt, std::nullopt}));
  return next;
}

bool ResidualSet::IsSubsetOf(const ResidualSet& other) const {
  return std::includes(other.instance_ids.begin(), other.instance_ids.end(),
                       instance_ids.begin(), instance_ids.end());
}

ResidualSet ResidualOf(const OutcomeMatrix& matrix,
                       const std::set<std::string>& instances,
                       const std::vector<std::string>& skill_ids,
                       int* unattempted) {
  ResidualSet residual;
  int missing = 0;
  for (const std::string& x : instances) {
    bool any_solved = false;
    for (const std::string& s : skill_ids) {
      const auto& attempts = matrix.Attempts(s, x);
      if (attempts.empty()) {
        ++missing;
        continue;
      }
      if (matrix.Solved(s, x)) {
        any_solved = true;
        break;
      }
    }
    if (!any_solved) residual.instance_ids.insert(x);
  }
  if (unattempted != nullptr) {
    *unattempted = missing;
  } else if (missing > 0) {
    LOG(WARNING) << missing
                 << " unattempted (skill, instance) pairs treated as failures";
  }
  return residual;
}

std::vector<OutcomeLogRecord> FlattenOutcomes(const OutcomeMatrix& matrix) {
  std::vector<OutcomeLogRecord> out;
  for (const auto& [key, attempts] : matrix.records()) {
    for (size_t i = 0; i < attempts.size(); ++i) {
      out.push_back(OutcomeLogRecord{key.first, key.second,
                                     static_cast<int>(i), attempts[i]});
    }
  }
  return out;
}

nlohmann::json OutcomeRecordToJson(const OutcomeLogRecord& r) {
  auto opt = [](const auto& v) {
    return v.has_value() ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {{"skill_id", r.skill_id},
          {"instance_id", r.instance_id},
          {"attempt", r.attempt},
          {"success", r.outcome.success},
          {"candidate_ref", opt(r.outcome.candidate_ref)},
          {"batch", opt(r.outcome.batch)},
          {"position", opt(r.outcome.position)}};
}

absl::StatusOr<OutcomeLogRecord> OutcomeRecordFromJson(
    const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("skill_id") || !j.contains("instance_id") ||
      !j.contains("success") || !j["success"].is_boolean()) {
    return MakeError(ErrorKind::kParseError,
                     "outcome record needs skill_id, instance_id, success");
  }
  OutcomeLogRecord r;
  r.skill_id = j["skill_id"].get<std::string>();
  r.instance_id = j["instance_id"].get<std::string>();
  r.attempt = j.value("attempt", 0);
  r.outcome.success = j["success"].get<bool>();
  if (j.contains("candidate_ref") && j["candidate_ref"].is_string()) {
    r.outcome.candidate_ref = j["candidate_ref"].get<std::string>();
  }
  if (j.contains("batch") && j["batch"].is_number_integer()) {
    r.outcome.batch = j["batch"].get<int>();
  }
  if (j.contains("position") && j["position"].is_number_integer()) {
    r.outcome.position = j["position"].get<int>();
  }
  return r;
}

std::string OutcomesToJsonl(const OutcomeMatrix& matrix) {
  std::string out;
  for (const OutcomeLogRecord& r : FlattenOutcomes(matrix)) {
    absl::StrAppend(&out, OutcomeRecordToJson(r).dump(), "\n");
  }
  return out;
}

absl::StatusOr<OutcomeMatrix> OutcomesFromJsonl(const std::string& text) {
  OutcomeMatrix matrix;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      return MakeError(ErrorKind::kParseError,
                       absl::StrCat("outcome log line ", line_no,
                                    ": invalid JSON"));
    }
    auto record = OutcomeRecordFromJson(j);
    if (!record.ok()) {
      return Annotate(record.status(),
                      absl::StrCat("outcome log line ", line_no));
    }
    matrix.RegisterSkill(record->skill_id);
    matrix.RegisterInstance(record->instance_id);
    DIVSKILL_RETURN_IF_ERROR(matrix.Append(
        record->skill_id, record->instance_id, std::move(record->outcome)));
  }
  return matrix;
}

}  // namespace divskill
