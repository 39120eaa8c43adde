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


// Inference-time selection over the K candidates produced for one instance:
// collapse candidates with equal execution fingerprints, then run a
// round-robin tournament among class representatives where every pair is
// judged twice with the presentation order swapped.

#ifndef DIVSKILL_SELECTION_SELECTION_H_
#define DIVSKILL_SELECTION_SELECTION_H_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "core/types.h"
#include "exec/canonical.h"
#include "exec/sqlite_runner.h"
#include "json.hpp"

namespace divskill::selection {

struct Candidate {
  size_t skill_index = 0;  // position in the pool; the tie-break key
  std::string skill_id;
  std::string sql;
  exec::ExecOutcome outcome;
};

struct CandidatePool {
  std::string instance_id;
  std::vector<Candidate> candidates;
  std::vector<std::string> fingerprints;      // empty string for errors
  std::vector<std::vector<size_t>> classes;   // candidate indices
  std::vector<size_t> representatives;        // one per non-error class
  bool all_errored = false;

  size_t G() const { return representatives.size(); }
};

// Classes are ordered by their lowest skill index; each errored candidate is
// its own class. InvalidArgument when `candidates` is empty.
absl::StatusOr<CandidatePool> Deduplicate(std::string instance_id,
                                          std::vector<Candidate> candidates,
                                          const exec::MatchPolicy& policy = {});

enum class Side { kA, kB };

struct JudgeCandidate {
  std::string sql;
  std::string preview;
  const exec::ExecOutcome* outcome = nullptr;  // for oracle-style judges
};

struct JudgeRequest {
  std::string question;
  std::string schema_summary;
  JudgeCandidate a;
  JudgeCandidate b;
};

// Total: implementations return a side or a JudgeFailure, never a tie.
// RunTournament may call Compare concurrently when jobs > 1.
class JudgeInterface {
 public:
  virtual ~JudgeInterface() = default;
  virtual absl::StatusOr<Side> Compare(const JudgeRequest& request) = 0;
};

struct TournamentOptions {
  int max_judge_attempts = 2;  // per judgment, before it is forfeited
  int jobs = 1;
};

struct TournamentResult {
  size_t winner = 0;          // index into pool.representatives
  std::vector<int> wins;      // parallel to pool.representatives
  int judgments = 0;          // 2 * C(G, 2)
  int forfeits = 0;
  int judge_calls = 0;        // including retries
};

// InvalidArgument when the pool has no representatives.
absl::StatusOr<TournamentResult> RunTournament(const CandidatePool& pool,
                                               JudgeInterface& judge,
                                               const std::string& question,
                                               const std::string& schema_summary,
                                               const TournamentOptions& options = {});

struct Selection {
  std::string instance_id;
  std::string winner_skill_id;
  size_t winner_skill_index = 0;
  std::string sql;
  size_t G = 0;
  std::map<std::string, int> win_counts;  // by skill id
  bool all_candidates_errored = false;
  int judge_calls = 0;
  int forfeits = 0;
};

// Deduplicate then tournament. When every candidate errored, the
// lowest-index candidate is passed through with all_candidates_errored set.
absl::StatusOr<Selection> Select(const Instance& instance,
                                 std::vector<Candidate> candidates,
                                 JudgeInterface& judge,
                                 const exec::MatchPolicy& policy = {},
                                 const TournamentOptions& options = {});

nlohmann::json SelectionToJson(const Selection& selection);
absl::StatusOr<Selection> SelectionFromJson(const nlohmann::json& j);

}  // namespace divskill::selection

#endif  // DIVSKILL_SELECTION_SELECTION_H_
