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


#include "selection/selection.h"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "absl/strings/str_cat.h"
#include "core/errors.h"
#include "core/util.h"
#include "exec/preview.h"
#include "glog/logging.h"

namespace divskill::selection {

absl::StatusOr<CandidatePool> Deduplicate(std::string instance_id,
                                          std::vector<Candidate> candidates,
                                          const exec::MatchPolicy& policy) {
  if (candidates.empty()) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("no candidates for ", instance_id));
  }
  CandidatePool pool;
  pool.instance_id = std::move(instance_id);
  pool.candidates = std::move(candidates);

  std::vector<size_t> order(pool.candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return pool.candidates[a].skill_index < pool.candidates[b].skill_index;
  });

  pool.fingerprints.resize(pool.candidates.size());
  std::unordered_map<std::string, size_t> class_of;
  for (size_t i : order) {
    const Candidate& c = pool.candidates[i];
    if (exec::IsError(c.outcome)) {
      pool.classes.push_back({i});
      continue;
    }
    const std::string fp = exec::Fingerprint(std::get<ResultTable>(c.outcome), policy);
    pool.fingerprints[i] = fp;
    auto [it, inserted] = class_of.emplace(fp, pool.classes.size());
    if (inserted) {
      pool.classes.push_back({i});
      pool.representatives.push_back(i);
    } else {
      pool.classes[it->second].push_back(i);
    }
  }
  pool.all_errored = pool.representatives.empty();
  return pool;
}

absl::StatusOr<TournamentResult> RunTournament(const CandidatePool& pool,
                                               JudgeInterface& judge,
                                               const std::string& question,
                                               const std::string& schema_summary,
                                               const TournamentOptions& options) {
  const size_t g = pool.representatives.size();
  if (g == 0) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("pool for ", pool.instance_id, " has no representatives"));
  }
  TournamentResult result;
  result.wins.assign(g, 0);
  if (g == 1) return result;

  std::vector<JudgeCandidate> shown(g);
  for (size_t r = 0; r < g; ++r) {
    const Candidate& c = pool.candidates[pool.representatives[r]];
    shown[r] = {c.sql, exec::RenderPreview(c.outcome), &c.outcome};
  }
  // Ordered presentations: (i, j) and (j, i) for every i < j.
  std::vector<std::pair<size_t, size_t>> games;
  for (size_t i = 0; i < g; ++i) {
    for (size_t j = i + 1; j < g; ++j) {
      games.emplace_back(i, j);
      games.emplace_back(j, i);
    }
  }
  struct Verdict {
    int winner = -1;  // representative index, -1 when forfeited
    int calls = 0;
  };
  std::vector<Verdict> verdicts(games.size());
  ParallelFor(games.size(), options.jobs, [&](size_t k) {
    const auto [first, second] = games[k];
    JudgeRequest request{question, schema_summary, shown[first], shown[second]};
    absl::Status last;
    for (int attempt = 0; attempt < std::max(1, options.max_judge_attempts); ++attempt) {
      ++verdicts[k].calls;
      auto side = judge.Compare(request);
      if (side.ok()) {
        verdicts[k].winner = static_cast<int>(*side == Side::kA ? first : second);
        return;
      }
      last = side.status();
    }
    LOG(WARNING) << "judgment forfeited for " << pool.instance_id << " ("
                 << pool.candidates[pool.representatives[first]].skill_id << " vs "
                 << pool.candidates[pool.representatives[second]].skill_id
                 << "): " << last;
  });

  result.judgments = static_cast<int>(games.size());
  for (const Verdict& v : verdicts) {
    result.judge_calls += v.calls;
    if (v.winner < 0) {
      ++result.forfeits;
    } else {
      ++result.wins[static_cast<size_t>(v.winner)];
    }
  }
  // Representatives are ordered by skill index, so the first maximum is the
  // lowest-index one.
  result.winner = static_cast<size_t>(
      std::max_element(result.wins.begin(), result.wins.end()) - result.wins.begin());
  return result;
}

absl::StatusOr<Selection> Select(const Instance& instance,
                                 std::vector<Candidate> candidates,
                                 JudgeInterface& judge,
                                 const exec::MatchPolicy& policy,
                                 const TournamentOptions& options) {
  DIVSKILL_ASSIGN_OR_RETURN(
      CandidatePool pool,
      Deduplicate(instance.instance_id, std::move(candidates), policy));
  Selection out;
  out.instance_id = instance.instance_id;
  out.G = pool.G();
  if (pool.all_errored) {
    const Candidate& first = pool.candidates[pool.classes.front().front()];
    out.winner_skill_id = first.skill_id;
    out.winner_skill_index = first.skill_index;
    out.sql = first.sql;
    out.all_candidates_errored = true;
    return out;
  }
  std::string schema;
  if (pool.G() > 1) {
    auto summary = exec::SchemaSummary(instance.db_ref);
    if (summary.ok()) schema = *std::move(summary);
  }
  DIVSKILL_ASSIGN_OR_RETURN(
      TournamentResult t,
      RunTournament(pool, judge, instance.question, schema, options));
  const Candidate& winner = pool.candidates[pool.representatives[t.winner]];
  out.winner_skill_id = winner.skill_id;
  out.winner_skill_index = winner.skill_index;
  out.sql = winner.sql;
  for (size_t r = 0; r < pool.representatives.size(); ++r) {
    out.win_counts[pool.candidates[pool.representatives[r]].skill_id] = t.wins[r];
  }
  out.judge_calls = t.judge_calls;
  out.forfeits = t.forfeits;
  return out;
}

nlohmann::json SelectionToJson(const Selection& s) {
  nlohmann::json wins = nlohmann::json::object();
  for (const auto& [id, w] : s.win_counts) wins[id] = w;
  return {{"instance_id", s.instance_id},
          {"winner_skill_id", s.winner_skill_id},
          {"sql", s.sql},
          {"G", s.G},
          {"win_counts", std::move(wins)},
          {"all_candidates_errored", s.all_candidates_errored}};
}

absl::StatusOr<Selection> SelectionFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("instance_id") || !j.contains("sql") ||
      !j["instance_id"].is_string() || !j["sql"].is_string()) {
    return MakeError(ErrorKind::kParseError,
                     "selection needs string fields instance_id and sql");
  }
  Selection s;
  s.instance_id = j["instance_id"].get<std::string>();
  s.sql = j["sql"].get<std::string>();
  s.winner_skill_id = j.value("winner_skill_id", std::string());
  s.G = j.value("G", size_t{0});
  s.all_candidates_errored = j.value("all_candidates_errored", false);
  if (j.contains("win_counts") && j["win_counts"].is_object()) {
    for (const auto& [id, w] : j["win_counts"].items()) {
      if (!w.is_number_integer()) {
        return MakeError(ErrorKind::kParseError, "win_counts values must be integers");
      }
      s.win_counts[id] = w.get<int>();
    }
  }
  return s;
}

}  // namespace divskill::selection
