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

#ifndef DIVSKILL_CORE_ERRORS_H_
#define DIVSKILL_CORE_ERRORS_H_

#include <string_view>

#include "absl/status/status.h"

namespace divskill {

// Domain error taxonomy. Every non-OK status produced by this library carries
// one of these kinds as a payload so callers (and the C API) can dispatch on
// it without parsing messages.
enum class ErrorKind {
  kNone = 0,
  kInvalidArgument,
  kUnknownId,
  kEmptyResidual,
  kBadK,
  kMissingSelection,
  kAlreadyInSet,
  kTooLarge,
  kTooFew,
  kParseError,
  kDuplicateId,
  kConfigError,
  kExecutorFailure,
  kOptimizerFailure,
  kOptimizerScreenViolation,
  kNoFailures,
  kJudgeFailure,
  kTransportError,
  kMalformedToolCall,
  kUnknownTool,
  kIoError,
  kInternal,
};

std::string_view ErrorKindName(ErrorKind kind);

absl::Status MakeError(ErrorKind kind, std::string_view message);

// Returns kNone for OK statuses and kInternal for statuses that were not built
// through MakeError.
ErrorKind KindOf(const absl::Status& status);

// Prefixes the message of `status` with `context` and keeps the kind.
absl::Status Annotate(const absl::Status& status, std::string_view context);

}  // namespace divskill

#define DIVSKILL_RETURN_IF_ERROR(expr)          \
  do {                                          \
    ::absl::Status _ds_status = (expr);         \
    if (!_ds_status.ok()) return _ds_status;    \
  } while (0)

#define DIVSKILL_CONCAT_INNER_(a, b) a##b
#define DIVSKILL_CONCAT_(a, b) DIVSKILL_CONCAT_INNER_(a, b)

#define DIVSKILL_ASSIGN_OR_RETURN(lhs, expr) \
  DIVSKILL_ASSIGN_OR_RETURN_IMPL_(           \
      DIVSKILL_CONCAT_(_ds_statusor_, __LINE__), lhs, expr)

#define DIVSKILL_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                    \
  if (!tmp.ok()) return tmp.status();                   \
  lhs = std::move(tmp).value()

#endif  // DIVSKILL_CORE_ERRORS_H_
