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

#include "agents/synthetic.h"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "core/errors.h"

namespace divskill::agents {
namespace {

using trajectory::ToolEvent;

CapabilitySet ParseTagged(std::string_view text, std::string_view prefix) {
  CapabilitySet out;
  size_t pos = 0;
  while ((pos = text.find(prefix, pos)) != std::string_view::npos) {
    const bool at_boundary =
        pos == 0 || !(std::isalnum(static_cast<unsigned char>(text[pos - 1])) ||
                      text[pos - 1] == '_');
    const size_t at = pos + prefix.size();
    pos = at;
    if (!at_boundary || at >= text.size()) continue;
    const char c = text[at];
    const bool single = at + 1 >= text.size() ||
                        !(std::isalnum(static_cast<unsigned char>(text[at + 1])) ||
                          text[at + 1] == '_');
    if (c >= 'a' && c <= 'z' && single) out.set(static_cast<size_t>(c - 'a'));
  }
  return out;
}

std::string SqlLiteral(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "NULL";
        } else if constexpr (std::is_same_v<T, int64_t>) {
          return absl::StrCat(v);
        } else if constexpr (std::is_same_v<T, double>) {
          char buf[40];
          std::snprintf(buf, sizeof(buf), "%.17g", v);
          std::string s(buf);
          if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
          return s;
        } else if constexpr (std::is_same_v<T, std::string>) {
          std::string quoted = "'";
          for (char c : v) {
            if (c == '\'') quoted += '\'';
            quoted += c;
          }
          return quoted + "'";
        } else {
          return "NULL";
        }
      },
      cell);
}

// Tool used to exercise capability letter `i`.
ToolEvent CapabilityEvent(size_t i) {
  switch (i % 5) {
    case 0:
      return {ToolEvent::Kind::kToolCall, "execute_sql",
              "SELECT * FROM data LIMIT 5", false};
    case 1:
      return {ToolEvent::Kind::kToolCall, "lookup_docs", "", false};
    case 2:
      return {ToolEvent::Kind::kToolCall, "get_sql_pattern", "", false};
    case 3:
      return {ToolEvent::Kind::kToolCall, "get_sql_templates", "", false};
    default:
      return {ToolEvent::Kind::kToolCall, "review_sql", "", false};
  }
}

}  // namespace

CapabilitySet ParseCapabilities(std::string_view prompt) {
  return ParseTagged(prompt, "cap:");
}

CapabilitySet ParseRequirements(std::string_view question) {
  return ParseTagged(question, "req:");
}

std::string CapabilityString(const CapabilitySet& caps) {
  std::string out;
  for (size_t i = 0; i < kCapabilityAlphabetSize; ++i) {
    if (caps.test(i)) out.push_back(static_cast<char>('a' + i));
  }
  return out;
}

absl::StatusOr<SyntheticSkill> ParseSyntheticSkill(const Skill& skill,
                                                   double noise) {
  if (!(noise >= 0.0 && noise < 1.0)) {
    return MakeError(ErrorKind::kConfigError,
                     absl::StrCat("synthetic noise ", noise, " outside [0, 1)"));
  }
  return SyntheticSkill{ParseCapabilities(skill.prompt), noise};
}

absl::StatusOr<std::string> LiteralSelect(const ResultTable& table) {
  if (table.columns.empty()) {
    return MakeError(ErrorKind::kInvalidArgument, "table has no columns");
  }
  auto select_row = [&table](const std::vector<Cell>* row) {
    std::vector<std::string> parts;
    for (size_t c = 0; c < table.columns.size(); ++c) {
      parts.push_back(absl::StrCat(row ? SqlLiteral((*row)[c]) : "NULL",
                                   " AS c", c));
    }
    return absl::StrCat("SELECT ", absl::StrJoin(parts, ", "));
  };
  if (table.rows.empty()) return absl::StrCat(select_row(nullptr), " WHERE 0");
  std::vector<std::string> selects;
  for (const auto& row : table.rows) {
    for (const Cell& cell : row) {
      if (std::holds_alternative<BlobDigest>(cell)) {
        return MakeError(ErrorKind::kInvalidArgument,
                         "blob digests cannot be rendered as literals");
      }
    }
    selects.push_back(select_row(&row));
  }
  return absl::StrJoin(selects, " UNION ALL ");
}

RunResult SimulatedExecute(const Skill& skill, const Instance& instance,
                           double noise, std::mt19937_64& rng,
                           const exec::ExecLimits& limits) {
  const CapabilitySet caps = ParseCapabilities(skill.prompt);
  const CapabilitySet reqs = ParseRequirements(instance.question);
  const bool covered = (reqs & ~caps).none();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool noise_failure = unit(rng) < noise;

  RunResult result;
  std::string sql;
  if (covered && !noise_failure) {
    if (instance.gold.sql.has_value()) {
      sql = *instance.gold.sql;
    } else if (instance.gold.result.has_value()) {
      auto literal = LiteralSelect(*instance.gold.result);
      if (literal.ok()) sql = *literal;
    }
  }
  if (sql.empty()) {
    sql = absl::StrCat("SELECT 'synthetic-miss' AS answer, '",
                       CapabilityString(caps), "' AS strategy");
  }

  // The action sequence depends only on (caps, reqs).
  auto& log = result.log;
  log.push_back({ToolEvent::Kind::kToolCall, "execute_sql",
                 "SELECT name FROM sqlite_master", false});
  size_t extra = 0;
  for (size_t i = 0; i < kCapabilityAlphabetSize && extra < 8; ++i) {
    if (!caps.test(i)) continue;
    log.push_back(CapabilityEvent(i));
    ++extra;
  }
  log.push_back({ToolEvent::Kind::kDraft, "", sql, false});
  if (!covered) {
    log.push_back({ToolEvent::Kind::kToolCall, "execute_sql",
                   "SELECT unmet_requirement FROM unknown_relation", true});
  }
  log.push_back({ToolEvent::Kind::kToolCall, "execute_sql", sql, false});
  log.push_back({ToolEvent::Kind::kToolCall, "submit_final_sql", sql, false});

  result.trajectory =
      *trajectory::ExtractActions(log, skill.skill_id, instance.instance_id);
  result.sql = sql;
  result.execution = exec::ExecuteSql(instance.db_ref, sql, limits);
  result.termination = Termination::kSubmitted;
  return result;
}

absl::StatusOr<RunResult> SyntheticExecutor::Run(const Skill& skill,
                                                 const Instance& instance,
                                                 const Budgets& budgets,
                                                 uint64_t seed) {
  DIVSKILL_RETURN_IF_ERROR(budgets.Validate());
  if (!(noise_ >= 0.0 && noise_ < 1.0)) {
    return MakeError(ErrorKind::kConfigError, "synthetic noise outside [0, 1)");
  }
  std::mt19937_64 rng(seed);
  return SimulatedExecute(skill, instance, noise_, rng, limits_);
}

absl::StatusOr<std::string> MutateSkill(
    const std::string& prompt, const std::vector<FailureTrace>& failures) {
  if (failures.empty()) {
    return MakeError(ErrorKind::kNoFailures, "nothing to learn from");
  }
  const CapabilitySet caps = ParseCapabilities(prompt);
  std::array<int, kCapabilityAlphabetSize> histogram{};
  for (const FailureTrace& f : failures) {
    const CapabilitySet unmet = ParseRequirements(f.instance.question) & ~caps;
    for (size_t i = 0; i < kCapabilityAlphabetSize; ++i) {
      if (unmet.test(i)) ++histogram[i];
    }
  }
  size_t best = kCapabilityAlphabetSize;
  for (size_t i = 0; i < kCapabilityAlphabetSize; ++i) {
    if (histogram[i] > 0 &&
        (best == kCapabilityAlphabetSize || histogram[i] > histogram[best])) {
      best = i;
    }
  }
  if (best == kCapabilityAlphabetSize) return prompt;
  return absl::StrCat(prompt, " cap:", std::string(1, static_cast<char>('a' + best)));
}

}  // namespace divskill::agents
