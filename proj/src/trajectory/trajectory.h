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

// Behavioral-diversity diagnostics over agent runs: tool-call logs are mapped
// to a closed alphabet of high-level actions and compared with normalized
// Levenshtein similarity.

#ifndef DIVSKILL_TRAJECTORY_TRAJECTORY_H_
#define DIVSKILL_TRAJECTORY_TRAJECTORY_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace divskill::trajectory {

enum class Action {
  kInspectSchema,
  kSampleRows,
  kDraftSql,
  kExecute,
  kRepair,
  kLookupDocs,
  kGetPattern,
  kGetTemplate,
  kReview,
  kSubmit,
};

inline constexpr int kNumActions = 10;

std::string_view ActionName(Action action);
absl::StatusOr<Action> ParseAction(std::string_view name);

struct Trajectory {
  std::string skill_id;
  std::string instance_id;
  std::vector<Action> actions;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// One entry of the raw log an agent run produces.
struct ToolEvent {
  enum class Kind { kToolCall, kDraft };
  Kind kind = Kind::kToolCall;
  std::string tool;            // tool name for kToolCall
  std::string sql;             // SQL argument or drafted SQL, when present
  bool exec_error = false;     // execute_sql returned an error
  friend bool operator==(const ToolEvent&, const ToolEvent&) = default;
};

nlohmann::json ToolEventToJson(const ToolEvent& event);

// Maps the raw log to actions:
//   execute_sql on catalog queries        -> inspect_schema
//   execute_sql probing rows with LIMIT   -> sample_rows
//   execute_sql right after a failed one  -> repair
//   other execute_sql                     -> execute
//   lookup_docs / get_sql_pattern / get_sql_templates / review_sql /
//   submit_final_sql                      -> their own symbols
//   drafts                                -> draft_sql
// Fails with UnknownTool on names outside the fixed six.
absl::StatusOr<Trajectory> ExtractActions(std::span<const ToolEvent> log,
                                          std::string skill_id = {},
                                          std::string instance_id = {});

// Heuristic for exploratory row probes: a non-aggregating SELECT with a small
// LIMIT.
bool IsRowProbe(std::string_view sql);

size_t EditDistance(std::span<const Action> a, std::span<const Action> b);

// 1 - EditDistance / max(|a|, |b|); 1 when both are empty.
double NormalizedSimilarity(const Trajectory& a, const Trajectory& b);
double NormalizedSimilarity(std::span<const Action> a,
                            std::span<const Action> b);

struct InstanceSimilarity {
  std::string instance_id;
  std::vector<std::string> skill_ids;        // row/column labels
  std::vector<std::vector<double>> matrix;   // symmetric, unit diagonal
};

struct PairSummary {
  std::string skill_a;
  std::string skill_b;
  std::vector<double> values;  // one per instance where both ran
  double mean = 0.0;
  std::vector<int> histogram;  // bins of width 0.05 over [0, 1]
};

struct SimilarityReport {
  std::vector<InstanceSimilarity> per_instance;
  std::vector<PairSummary> pairs;
  double mean_off_diagonal = 0.0;
  std::vector<int> histogram;
};

inline constexpr double kHistogramBinWidth = 0.05;

// Groups trajectories by instance and builds one matrix per instance. Every
// instance needs at least two trajectories (TooFew otherwise). Rows follow the
// order in which skills first appear in the input.
absl::StatusOr<SimilarityReport> SimilarityMatrix(
    const std::vector<Trajectory>& trajectories);

nlohmann::json SimilarityReportToJson(const SimilarityReport& report);

nlohmann::json TrajectoryToJson(const Trajectory& trajectory);
absl::StatusOr<Trajectory> TrajectoryFromJson(const nlohmann::json& j);

}  // namespace divskill::trajectory

#endif  // DIVSKILL_TRAJECTORY_TRAJECTORY_H_
