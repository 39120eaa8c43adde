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

#ifndef DIVSKILL_EXEC_SQLITE_RUNNER_H_
#define DIVSKILL_EXEC_SQLITE_RUNNER_H_

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "absl/status/statusor.h"
#include "core/result_table.h"

namespace divskill::exec {

struct ExecLimits {
  double timeout_s = 30.0;
  size_t max_rows = 10000;
};

// kEngine covers failures outside the four query-level categories (database
// cannot be opened, constraint or type errors raised while stepping, ...).
enum class ExecErrorKind { kSyntax, kSchema, kTimeout, kRowLimit, kEngine };

std::string_view ExecErrorKindName(ExecErrorKind kind);

struct ExecError {
  ExecErrorKind kind = ExecErrorKind::kEngine;
  std::string message;  // engine message, verbatim where there is one
  friend bool operator==(const ExecError&, const ExecError&) = default;
};

using ExecOutcome = std::variant<ResultTable, ExecError>;

inline bool IsError(const ExecOutcome& outcome) {
  return std::holds_alternative<ExecError>(outcome);
}

// Classifies an engine error message into the taxonomy.
ExecErrorKind ClassifySqliteError(std::string_view message);

// Runs `sql` against the SQLite database at `db_ref` (":memory:" allowed).
// Files are opened read-only; each call owns its own connection.
ExecOutcome ExecuteSql(const std::string& db_ref, const std::string& sql,
                       const ExecLimits& limits = {});

// Lower-cased table and column names of every table and view in the
// database.
absl::StatusOr<std::set<std::string>> SchemaIdentifiers(
    const std::string& db_ref);

// "table(col type, ...)" lines, one per table, for prompts.
absl::StatusOr<std::string> SchemaSummary(const std::string& db_ref);

// True for queries that only read catalog metadata (sqlite_master, PRAGMA,
// information_schema, SHOW/DESCRIBE).
bool IsMetadataQuery(std::string_view sql);

}  // namespace divskill::exec

#endif  // DIVSKILL_EXEC_SQLITE_RUNNER_H_
