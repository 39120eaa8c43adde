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

#ifndef DIVSKILL_CORE_OUTCOME_MATRIX_H_
#define DIVSKILL_CORE_OUTCOME_MATRIX_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "core/rational.h"
#include "json.hpp"

namespace divskill {

// One evaluated attempt. `success` is an execution-match verdict against the
// gold answer and nothing else.
struct AttemptOutcome {
  bool success = false;
  std::optional<std::string> candidate_ref;
  std::optional<int> batch;
  std::optional<int> position;
  friend bool operator==(const AttemptOutcome&, const AttemptOutcome&) =
      default;
};

struct SuccessCount {
  int successes = 0;
  int attempts = 0;
};

// Append-only record of attempt outcomes per (skill, instance). Ids have to be
// registered before outcomes can be recorded against them.
class OutcomeMatrix {
 public:
  using Key = std::pair<std::string, std::string>;  // (skill_id, instance_id)

  void RegisterSkill(const std::string& skill_id);
  void RegisterInstance(const std::string& instance_id);
  bool HasSkill(const std::string& skill_id) const;
  bool HasInstance(const std::string& instance_id) const;

  // Single-writer append.
  absl::Status Append(const std::string& skill_id,
                      const std::string& instance_id, AttemptOutcome outcome);

  // Attempts for the pair; empty when nothing was recorded.
  const std::vector<AttemptOutcome>& Attempts(
      const std::string& skill_id, const std::string& instance_id) const;
  SuccessCount Count(const std::string& skill_id,
                     const std::string& instance_id) const;
  // True iff any recorded attempt succeeded.
  bool Solved(const std::string& skill_id,
              const std::string& instance_id) const;

  // Appends every record of `other` (ids are registered as needed).
  void Merge(const OutcomeMatrix& other);

  const std::map<Key, std::vector<AttemptOutcome>>& records() const {
    return records_;
  }
  const std::set<std::string>& skill_ids() const { return skills_; }
  const std::set<std::string>& instance_ids() const { return instances_; }

  friend bool operator==(const OutcomeMatrix&, const OutcomeMatrix&) = default;

 private:
  std::set<std::string> skills_;
  std::set<std::string> instances_;
  std::map<Key, std::vector<AttemptOutcome>> records_;
};

// Value-returning form: `matrix` is left untouched.
absl::StatusOr<OutcomeMatrix> RecordOutcome(const OutcomeMatrix& matrix,
                                            const std::string& skill_id,
                                            const std::string& instance_id,
                                            bool success);

struct ResidualProvenance {
  int batch = 0;
  int position = 0;
  friend bool operator==(const ResidualProvenance&,
                         const ResidualProvenance&) = default;
};

struct ResidualSet {
  std::set<std::string> instance_ids;
  ResidualProvenance provenance;

  size_t size() const { return instance_ids.size(); }
  bool empty() const { return instance_ids.empty(); }
  bool IsSubsetOf(const ResidualSet& other) const;
};

// Instances on which every listed skill failed all of its recorded attempts.
// A (skill, instance) pair with no attempts counts as a failure; the number of
// such pairs is written to `unattempted` when non-null and logged as a
// warning otherwise.
ResidualSet ResidualOf(const OutcomeMatrix& matrix,
                       const std::set<std::string>& instances,
                       const std::vector<std::string>& skill_ids,
                       int* unattempted = nullptr);

// One JSONL row of the outcome log.
struct OutcomeLogRecord {
  std::string skill_id;
  std::string instance_id;
  int attempt = 0;
  AttemptOutcome outcome;
};

std::vector<OutcomeLogRecord> FlattenOutcomes(const OutcomeMatrix& matrix);
nlohmann::json OutcomeRecordToJson(const OutcomeLogRecord& record);
absl::StatusOr<OutcomeLogRecord> OutcomeRecordFromJson(const nlohmann::json& j);

// Serializes in key order: one line per attempt.
std::string OutcomesToJsonl(const OutcomeMatrix& matrix);
absl::StatusOr<OutcomeMatrix> OutcomesFromJsonl(const std::string& text);

}  // namespace divskill

#endif  // DIVSKILL_CORE_OUTCOME_MATRIX_H_
