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

#include "trajectory/trajectory.h"

#include <algorithm>
#include <array>
#include <regex>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "core/errors.h"
#include "exec/sqlite_runner.h"

namespace divskill::trajectory {
namespace {

constexpr std::array<std::string_view, kNumActions> kActionNames = {
    "inspect_schema", "sample_rows", "draft_sql",   "execute",
    "repair",         "lookup_docs", "get_pattern", "get_template",
    "review",         "submit"};

constexpr int kProbeLimit = 100;

int HistogramBin(double v) {
  const int bins = static_cast<int>(1.0 / kHistogramBinWidth + 0.5);
  int bin = static_cast<int>(v / kHistogramBinWidth);
  return std::clamp(bin, 0, bins - 1);
}

std::vector<int> EmptyHistogram() {
  return std::vector<int>(static_cast<size_t>(1.0 / kHistogramBinWidth + 0.5),
                          0);
}

}  // namespace

std::string_view ActionName(Action action) {
  return kActionNames[static_cast<size_t>(action)];
}

absl::StatusOr<Action> ParseAction(std::string_view name) {
  for (size_t i = 0; i < kActionNames.size(); ++i) {
    if (kActionNames[i] == name) return static_cast<Action>(i);
  }
  return MakeError(ErrorKind::kParseError,
                   absl::StrCat("unknown action '", std::string(name), "'"));
}

nlohmann::json ToolEventToJson(const ToolEvent& event) {
  nlohmann::json j = {
      {"kind", event.kind == ToolEvent::Kind::kDraft ? "draft" : "tool_call"}};
  if (!event.tool.empty()) j["tool"] = event.tool;
  if (!event.sql.empty()) j["sql"] = event.sql;
  if (event.exec_error) j["exec_error"] = true;
  return j;
}

bool IsRowProbe(std::string_view sql) {
  static const std::regex kLimit(R"(\blimit\s+(\d+)\s*;?\s*$)",
                                 std::regex::icase);
  static const std::regex kAggregate(
      R"(\b(count|sum|avg|min|max|group_concat|total)\s*\(|\bgroup\s+by\b)",
      std::regex::icase);
  const std::string s(sql);
  std::smatch m;
  if (!std::regex_search(s, m, kLimit)) return false;
  if (std::stoll(m[1].str()) > kProbeLimit) return false;
  return !std::regex_search(s, kAggregate);
}

absl::StatusOr<Trajectory> ExtractActions(std::span<const ToolEvent> log,
                                          std::string skill_id,
                                          std::string instance_id) {
  Trajectory out{std::move(skill_id), std::move(instance_id), {}};
  bool previous_exec_failed = false;
  for (const ToolEvent& e : log) {
    if (e.kind == ToolEvent::Kind::kDraft) {
      out.actions.push_back(Action::kDraftSql);
      continue;
    }
    if (e.tool == "execute_sql") {
      Action a;
      if (exec::IsMetadataQuery(e.sql)) {
        a = Action::kInspectSchema;
      } else if (previous_exec_failed) {
        a = Action::kRepair;
      } else if (IsRowProbe(e.sql)) {
        a = Action::kSampleRows;
      } else {
        a = Action::kExecute;
      }
      out.actions.push_back(a);
      previous_exec_failed = e.exec_error;
      continue;
    }
    if (e.tool == "lookup_docs") {
      out.actions.push_back(Action::kLookupDocs);
    } else if (e.tool == "get_sql_pattern") {
      out.actions.push_back(Action::kGetPattern);
    } else if (e.tool == "get_sql_templates") {
      out.actions.push_back(Action::kGetTemplate);
    } else if (e.tool == "review_sql") {
      out.actions.push_back(Action::kReview);
    } else if (e.tool == "submit_final_sql") {
      out.actions.push_back(Action::kSubmit);
    } else {
      return MakeError(ErrorKind::kUnknownTool,
                       absl::StrCat("tool '", e.tool, "' is not in the tool set"));
    }
  }
  return out;
}

size_t EditDistance(std::span<const Action> a, std::span<const Action> b) {
  std::vector<size_t> prev(b.size() + 1);
  std::vector<size_t> cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double NormalizedSimilarity(std::span<const Action> a,
                            std::span<const Action> b) {
  const size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(EditDistance(a, b)) /
                   static_cast<double>(longest);
}

double NormalizedSimilarity(const Trajectory& a, const Trajectory& b) {
  return NormalizedSimilarity(a.actions, b.actions);
}

absl::StatusOr<SimilarityReport> SimilarityMatrix(
    const std::vector<Trajectory>& trajectories) {
  // Instance order and skill order both follow first appearance.
  std::vector<std::string> instance_order;
  std::map<std::string, std::vector<const Trajectory*>> by_instance;
  std::vector<std::string> skill_order;
  for (const Trajectory& t : trajectories) {
    if (!by_instance.contains(t.instance_id)) {
      instance_order.push_back(t.instance_id);
    }
    by_instance[t.instance_id].push_back(&t);
    if (std::find(skill_order.begin(), skill_order.end(), t.skill_id) ==
        skill_order.end()) {
      skill_order.push_back(t.skill_id);
    }
  }
  if (instance_order.empty()) {
    return MakeError(ErrorKind::kTooFew, "no trajectories");
  }
  auto skill_rank = [&skill_order](const std::string& id) {
    return std::find(skill_order.begin(), skill_order.end(), id) -
           skill_order.begin();
  };

  SimilarityReport report;
  report.histogram = EmptyHistogram();
  std::map<std::pair<std::string, std::string>, PairSummary> pairs;
  double off_sum = 0.0;
  size_t off_count = 0;
  for (const std::string& instance : instance_order) {
    const auto& runs = by_instance[instance];
    if (runs.size() < 2) {
      return MakeError(ErrorKind::kTooFew,
                       absl::StrCat("instance ", instance, " has ", runs.size(),
                                    " trajectory; at least 2 are needed"));
    }
    InstanceSimilarity sim;
    sim.instance_id = instance;
    const size_t n = runs.size();
    sim.matrix.assign(n, std::vector<double>(n, 1.0));
    for (const Trajectory* t : runs) sim.skill_ids.push_back(t->skill_id);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        const double v = NormalizedSimilarity(*runs[i], *runs[j]);
        sim.matrix[i][j] = sim.matrix[j][i] = v;
        off_sum += v;
        ++off_count;
        ++report.histogram[HistogramBin(v)];
        std::string a = runs[i]->skill_id;
        std::string b = runs[j]->skill_id;
        if (skill_rank(b) < skill_rank(a)) std::swap(a, b);
        PairSummary& summary = pairs[{a, b}];
        summary.skill_a = a;
        summary.skill_b = b;
        summary.values.push_back(v);
      }
    }
    report.per_instance.push_back(std::move(sim));
  }
  report.mean_off_diagonal =
      off_count > 0 ? off_sum / static_cast<double>(off_count) : 1.0;

  std::vector<PairSummary> ordered;
  for (auto& [key, summary] : pairs) {
    summary.histogram = EmptyHistogram();
    double sum = 0.0;
    for (double v : summary.values) {
      sum += v;
      ++summary.histogram[HistogramBin(v)];
    }
    summary.mean = sum / static_cast<double>(summary.values.size());
    ordered.push_back(std::move(summary));
  }
  std::sort(ordered.begin(), ordered.end(),
            [&](const PairSummary& x, const PairSummary& y) {
              return std::make_pair(skill_rank(x.skill_a),
                                    skill_rank(x.skill_b)) <
                     std::make_pair(skill_rank(y.skill_a),
                                    skill_rank(y.skill_b));
            });
  report.pairs = std::move(ordered);
  return report;
}

nlohmann::json SimilarityReportToJson(const SimilarityReport& report) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const PairSummary& p : report.pairs) {
    pairs.push_back({{"skill_a", p.skill_a},
                     {"skill_b", p.skill_b},
                     {"count", p.values.size()},
                     {"mean", p.mean},
                     {"histogram", p.histogram}});
  }
  nlohmann::json instances = nlohmann::json::array();
  for (const InstanceSimilarity& s : report.per_instance) {
    instances.push_back({{"instance_id", s.instance_id},
                         {"skill_ids", s.skill_ids},
                         {"matrix", s.matrix}});
  }
  return {{"bin_width", kHistogramBinWidth},
          {"mean_off_diagonal", report.mean_off_diagonal},
          {"histogram", report.histogram},
          {"pairs", std::move(pairs)},
          {"per_instance", std::move(instances)}};
}

nlohmann::json TrajectoryToJson(const Trajectory& t) {
  nlohmann::json actions = nlohmann::json::array();
  for (Action a : t.actions) actions.push_back(std::string(ActionName(a)));
  return {{"skill_id", t.skill_id},
          {"instance_id", t.instance_id},
          {"actions", std::move(actions)}};
}

absl::StatusOr<Trajectory> TrajectoryFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("actions") || !j["actions"].is_array()) {
    return MakeError(ErrorKind::kParseError, "trajectory needs 'actions'");
  }
  Trajectory t;
  t.skill_id = j.value("skill_id", std::string());
  t.instance_id = j.value("instance_id", std::string());
  for (const auto& a : j["actions"]) {
    if (!a.is_string()) {
      return MakeError(ErrorKind::kParseError, "actions must be strings");
    }
    DIVSKILL_ASSIGN_OR_RETURN(Action action, ParseAction(a.get<std::string>()));
    t.actions.push_back(action);
  }
  return t;
}

}  // namespace divskill::trajectory
