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

#include "exec/sqlite_runner.h"

#include <sqlite3.h>

#include <chrono>
#include <memory>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "core/errors.h"
#include "core/util.h"

namespace divskill::exec {
namespace {

using Clock = std::chrono::steady_clock;

struct DbCloser {
  void operator()(sqlite3* db) const { sqlite3_close_v2(db); }
};
struct StmtFinalizer {
  void operator()(sqlite3_stmt* stmt) const { sqlite3_finalize(stmt); }
};
using DbHandle = std::unique_ptr<sqlite3, DbCloser>;
using StmtHandle = std::unique_ptr<sqlite3_stmt, StmtFinalizer>;

struct Deadline {
  Clock::time_point at;
  bool expired = false;
};

int ProgressCallback(void* arg) {
  auto* deadline = static_cast<Deadline*>(arg);
  if (Clock::now() >= deadline->at) {
    deadline->expired = true;
    return 1;
  }
  return 0;
}

absl::StatusOr<DbHandle> OpenDatabase(const std::string& db_ref) {
  sqlite3* raw = nullptr;
  int flags = SQLITE_OPEN_READONLY | SQLITE_OPEN_NOMUTEX;
  if (db_ref == ":memory:") flags = SQLITE_OPEN_READWRITE | SQLITE_OPEN_MEMORY;
  const int rc = sqlite3_open_v2(db_ref.c_str(), &raw, flags, nullptr);
  DbHandle db(raw);
  if (rc != SQLITE_OK) {
    return MakeError(ErrorKind::kIoError,
                     absl::StrCat("cannot open database ", db_ref, ": ",
                                  raw ? sqlite3_errmsg(raw) : "out of memory"));
  }
  return db;
}

Cell ReadCell(sqlite3_stmt* stmt, int col) {
  switch (sqlite3_column_type(stmt, col)) {
    case SQLITE_NULL:
      return std::monostate{};
    case SQLITE_INTEGER:
      return static_cast<int64_t>(sqlite3_column_int64(stmt, col));
    case SQLITE_FLOAT:
      return sqlite3_column_double(stmt, col);
    case SQLITE_BLOB: {
      const void* data = sqlite3_column_blob(stmt, col);
      const int size = sqlite3_column_bytes(stmt, col);
      return BlobDigest{Sha256Hex(std::string_view(
          static_cast<const char*>(data), static_cast<size_t>(size)))};
    }
    default: {
      const auto* text = sqlite3_column_text(stmt, col);
      const int size = sqlite3_column_bytes(stmt, col);
      return std::string(reinterpret_cast<const char*>(text),
                         static_cast<size_t>(size));
    }
  }
}

}  // namespace

std::string_view ExecErrorKindName(ExecErrorKind kind) {
  switch (kind) {
    case ExecErrorKind::kSyntax:
      return "SyntaxError";
    case ExecErrorKind::kSchema:
      return "SchemaError";
    case ExecErrorKind::kTimeout:
      return "Timeout";
    case ExecErrorKind::kRowLimit:
      return "RowLimit";
    case ExecErrorKind::kEngine:
      return "EngineError";
  }
  return "EngineError";
}

ExecErrorKind ClassifySqliteError(std::string_view message) {
  const std::string m = absl::AsciiStrToLower(std::string(message));
  if (absl::StrContains(m, "no such table") ||
      absl::StrContains(m, "no such column") ||
      absl::StrContains(m, "ambiguous column") ||
      absl::StrContains(m, "no such function") ||
      absl::StrContains(m, "no such view")) {
    return ExecErrorKind::kSchema;
  }
  if (absl::StrContains(m, "syntax error") ||
      absl::StrContains(m, "incomplete input") ||
      absl::StrContains(m, "unrecognized token") ||
      absl::StrContains(m, "near \"")) {
    return ExecErrorKind::kSyntax;
  }
  if (absl::StrContains(m, "interrupted")) return ExecErrorKind::kTimeout;
  return ExecErrorKind::kEngine;
}

ExecOutcome ExecuteSql(const std::string& db_ref, const std::string& sql,
                       const ExecLimits& limits) {
  if (sql.find_first_not_of(" \t\r\n;") == std::string::npos) {
    return ExecError{ExecErrorKind::kSyntax, "empty query"};
  }
  auto db = OpenDatabase(db_ref);
  if (!db.ok()) {
    return ExecError{ExecErrorKind::kEngine, std::string(db.status().message())};
  }
  Deadline deadline{Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(
                                           limits.timeout_s))};
  sqlite3_progress_handler(db->get(), 1000, &ProgressCallback, &deadline);

  sqlite3_stmt* raw = nullptr;
  const char* tail = nullptr;
  int rc = sqlite3_prepare_v2(db->get(), sql.c_str(),
                              static_cast<int>(sql.size()), &raw, &tail);
  StmtHandle stmt(raw);
  if (rc != SQLITE_OK) {
    const std::string msg = sqlite3_errmsg(db->get());
    if (deadline.expired) return ExecError{ExecErrorKind::kTimeout, msg};
    return ExecError{ClassifySqliteError(msg), msg};
  }
  if (!stmt) return ExecError{ExecErrorKind::kSyntax, "no statement in query"};
  if (tail != nullptr &&
      std::string_view(tail).find_first_not_of(" \t\r\n;") !=
          std::string_view::npos) {
    return ExecError{ExecErrorKind::kSyntax,
                     "multiple statements are not supported"};
  }

  ResultTable table;
  const int ncols = sqlite3_column_count(stmt.get());
  for (int c = 0; c < ncols; ++c) {
    const char* name = sqlite3_column_name(stmt.get(), c);
    table.columns.emplace_back(name ? name : "");
  }
  while (true) {
    rc = sqlite3_step(stmt.get());
    if (rc == SQLITE_DONE) break;
    if (rc != SQLITE_ROW) {
      const std::string msg = sqlite3_errmsg(db->get());
      if (deadline.expired || rc == SQLITE_INTERRUPT) {
        return ExecError{ExecErrorKind::kTimeout,
                         absl::StrCat("query exceeded ", limits.timeout_s,
                                      "s: ", msg)};
      }
      return ExecError{ClassifySqliteError(msg), msg};
    }
    if (table.rows.size() >= limits.max_rows) {
      return ExecError{ExecErrorKind::kRowLimit,
                       absl::StrCat("result exceeds ", limits.max_rows,
                                    " rows")};
    }
    std::vector<Cell> row;
    row.reserve(ncols);
    for (int c = 0; c < ncols; ++c) row.push_back(ReadCell(stmt.get(), c));
    table.rows.push_back(std::move(row));
  }
  return table;
}

absl::StatusOr<std::set<std::string>> SchemaIdentifiers(
    const std::string& db_ref) {
  std::set<std::string> out;
  auto tables = ExecuteSql(
      db_ref,
      "SELECT name FROM sqlite_master WHERE type IN ('table','view') "
      "AND name NOT LIKE 'sqlite_%' ORDER BY name");
  if (IsError(tables)) {
    return MakeError(ErrorKind::kIoError, std::get<ExecError>(tables).message);
  }
  for (const auto& row : std::get<ResultTable>(tables).rows) {
    const std::string table = std::get<std::string>(row[0]);
    out.insert(absl::AsciiStrToLower(table));
    std::string quoted = table;
    size_t pos = 0;
    while ((pos = quoted.find('\'', pos)) != std::string::npos) {
      quoted.insert(pos, "'");
      pos += 2;
    }
    auto cols = ExecuteSql(
        db_ref, absl::StrCat("SELECT name FROM pragma_table_info('", quoted,
                             "')"));
    if (IsError(cols)) continue;
    for (const auto& crow : std::get<ResultTable>(cols).rows) {
      if (const auto* name = std::get_if<std::string>(&crow[0])) {
        out.insert(absl::AsciiStrToLower(*name));
      }
    }
  }
  return out;
}

absl::StatusOr<std::string> SchemaSummary(const std::string& db_ref) {
  auto tables = ExecuteSql(
      db_ref,
      "SELECT name FROM sqlite_master WHERE type IN ('table','view') "
      "AND name NOT LIKE 'sqlite_%' ORDER BY name");
  if (IsError(tables)) {
    return MakeError(ErrorKind::kIoError, std::get<ExecError>(tables).message);
  }
  std::string out;
  for (const auto& row : std::get<ResultTable>(tables).rows) {
    const std::string table = std::get<std::string>(row[0]);
    auto cols = ExecuteSql(
        db_ref, absl::StrCat("SELECT name, type FROM pragma_table_info('",
                             table, "')"));
    absl::StrAppend(&out, table, "(");
    if (!IsError(cols)) {
      bool first = true;
      for (const auto& crow : std::get<ResultTable>(cols).rows) {
        const auto* name = std::get_if<std::string>(&crow[0]);
        const auto* type = std::get_if<std::string>(&crow[1]);
        absl::StrAppend(&out, first ? "" : ", ", name ? *name : "?",
                        type && !type->empty() ? " " : "", type ? *type : "");
        first = false;
      }
    }
    absl::StrAppend(&out, ")\n");
  }
  return out;
}

bool IsMetadataQuery(std::string_view sql) {
  const std::string m = absl::AsciiStrToLower(std::string(sql));
  const absl::string_view trimmed = absl::StripLeadingAsciiWhitespace(m);
  return absl::StrContains(m, "sqlite_master") ||
         absl::StrContains(m, "sqlite_schema") ||
         absl::StrContains(m, "information_schema") ||
         absl::StrContains(m, "pragma_table_info") ||
         absl::StartsWith(trimmed, "pragma") ||
         absl::StartsWith(trimmed, "show ") ||
         absl::StartsWith(trimmed, "describe ") ||
         absl::StartsWith(trimmed, "desc ");
}

}  // namespace divskill::exec
