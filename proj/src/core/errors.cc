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

#include "core/errors.h"

#include <array>
#include <string>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"

namespace divskill {
namespace {

constexpr absl::string_view kKindPayloadUrl = "type.divskill/error_kind";

struct KindEntry {
  ErrorKind kind;
  std::string_view name;
  absl::StatusCode code;
};

constexpr std::array<KindEntry, 22> kKinds = {{
    {ErrorKind::kNone, "None", absl::StatusCode::kOk},
    {ErrorKind::kInvalidArgument, "InvalidArgument",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kUnknownId, "UnknownId", absl::StatusCode::kNotFound},
    {ErrorKind::kEmptyResidual, "EmptyResidual",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kBadK, "BadK", absl::StatusCode::kOutOfRange},
    {ErrorKind::kMissingSelection, "MissingSelection",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kAlreadyInSet, "AlreadyInSet",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kTooLarge, "TooLarge", absl::StatusCode::kResourceExhausted},
    {ErrorKind::kTooFew, "TooFew", absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kParseError, "ParseError", absl::StatusCode::kInvalidArgument},
    {ErrorKind::kDuplicateId, "DuplicateId", absl::StatusCode::kAlreadyExists},
    {ErrorKind::kConfigError, "ConfigError",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kExecutorFailure, "ExecutorFailure",
     absl::StatusCode::kUnavailable},
    {ErrorKind::kOptimizerFailure, "OptimizerFailure",
     absl::StatusCode::kUnavailable},
    {ErrorKind::kOptimizerScreenViolation, "OptimizerScreenViolation",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kNoFailures, "NoFailures",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kJudgeFailure, "JudgeFailure", absl::StatusCode::kUnavailable},
    {ErrorKind::kTransportError, "TransportError",
     absl::StatusCode::kUnavailable},
    {ErrorKind::kMalformedToolCall, "MalformedToolCall",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kUnknownTool, "UnknownTool", absl::StatusCode::kNotFound},
    {ErrorKind::kIoError, "IoError", absl::StatusCode::kUnavailable},
    {ErrorKind::kInternal, "Internal", absl::StatusCode::kInternal},
}};

const KindEntry& Entry(ErrorKind kind) {
  for (const KindEntry& e : kKinds) {
    if (e.kind == kind) return e;
  }
  return kKinds.back();
}

}  // namespace

std::string_view ErrorKindName(ErrorKind kind) { return Entry(kind).name; }

absl::Status MakeError(ErrorKind kind, std::string_view message) {
  const KindEntry& e = Entry(kind);
  if (kind == ErrorKind::kNone) return absl::OkStatus();
  absl::Status status(e.code, absl::StrCat(std::string(e.name), ": ", std::string(message)));
  status.SetPayload(kKindPayloadUrl, absl::Cord(std::string(e.name)));
  return status;
}

ErrorKind KindOf(const absl::Status& status) {
  if (status.ok()) return ErrorKind::kNone;
  auto payload = status.GetPayload(kKindPayloadUrl);
  if (!payload.has_value()) return ErrorKind::kInternal;
  const std::string name(*payload);
  for (const KindEntry& e : kKinds) {
    if (e.name == name) return e.kind;
  }
  return ErrorKind::kInternal;
}

absl::Status Annotate(const absl::Status& status, std::string_view context) {
  if (status.ok()) return status;
  absl::Status out(status.code(), absl::StrCat(std::string(context), ": ", status.message()));
  status.ForEachPayload(
      [&out](absl::string_view url, const absl::Cord& payload) {
        out.SetPayload(url, payload);
      });
  return out;
}

}  // namespace divskill
