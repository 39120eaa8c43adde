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

#include "agents/executor.h"

#include "core/errors.h"

namespace divskill::agents {

absl::Status Budgets::Validate() const {
  if (max_turns <= 0 || max_sql_execs <= 0 || max_completion_tokens <= 0 ||
      !(temperature > 0.0)) {
    return MakeError(ErrorKind::kConfigError,
                     "budgets must all be positive");
  }
  return absl::OkStatus();
}

std::string_view TerminationName(Termination t) {
  switch (t) {
    case Termination::kSubmitted:
      return "submitted";
    case Termination::kTurnsExhausted:
      return "turns_exhausted";
    case Termination::kExecsExhausted:
      return "execs_exhausted";
    case Termination::kNoAnswer:
      return "no_answer";
    case Termination::kTransportFailed:
      return "transport_failed";
  }
  return "no_answer";
}

}  // namespace divskill::agents
