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

#ifndef DIVSKILL_AGENTS_EXECUTOR_H_
#define DIVSKILL_AGENTS_EXECUTOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "core/types.h"
#include "exec/sqlite_runner.h"
#include "trajectory/trajectory.h"

namespace divskill::agents {

struct Budgets {
  int max_turns = 12;
  int max_sql_execs = 20;
  int max_completion_tokens = 64000;
  double temperature = 0.2;

  absl::Status Validate() const;
};

enum class Termination {
  kSubmitted,
  kTurnsExhausted,
  kExecsExhausted,
  kNoAnswer,  // the model stopped calling tools without submitting
  kTransportFailed,
};

std::string_view TerminationName(Termination t);

// Outcome of one agent run. Soft failures (budget exhaustion, no answer) are
// reported here; only infrastructure failures surface as a non-OK status.
struct RunResult {
  std::string sql;  // final SQL; empty when the run produced none
  trajectory::Trajectory trajectory;
  std::vector<trajectory::ToolEvent> log;
  std::optional<exec::ExecOutcome> execution;  // result of running `sql`
  Termination termination = Termination::kSubmitted;
  std::string error;  // set when no SQL could be produced
};

// Runs a skill-conditioned agent on an instance.
class Executor {
 public:
  virtual ~Executor() = default;
  virtual absl::StatusOr<RunResult> Run(const Skill& skill,
                                        const Instance& instance,
                                        const Budgets& budgets,
                                        uint64_t seed) = 0;
};

// What a skill optimizer sees about one failed run.
struct FailureTrace {
  Instance instance;
  trajectory::Trajectory trajectory;
  std::string error_summary;
};

}  // namespace divskill::agents

#endif  // DIVSKILL_AGENTS_EXECUTOR_H_
