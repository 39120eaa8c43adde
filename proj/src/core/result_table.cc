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

#include "core/result_table.h"

#include "absl/strings/str_cat.h"
#include "core/errors.h"

namespace divskill {

bool ResultTable::WellFormed() const {
  for (const auto& row : rows) {
    if (row.size() != columns.size()) return false;
  }
  return true;
}

nlohmann::json ResultTableToJson(const ResultTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const Cell& cell : row) {
      std::visit(
          [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
              out.push_back(nullptr);
            } else if constexpr (std::is_same_v<T, BlobDigest>) {
              out.push_back({{"blob_sha256", v.sha256_hex}});
            } else {
              out.push_back(v);
            }
          },
          cell);
    }
    rows.push_back(std::move(out));
  }
  return {{"columns", table.columns}, {"rows", std::move(rows)}};
}

absl::StatusOr<ResultTable> ResultTableFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("columns") || !j.contains("rows") ||
      !j["columns"].is_array() || !j["rows"].is_array()) {
    return MakeError(ErrorKind::kParseError,
                     "result table needs 'columns' and 'rows' arrays");
  }
  ResultTable table;
  for (const auto& c : j["columns"]) {
    if (!c.is_string()) {
      return MakeError(ErrorKind::kParseError, "column names must be strings");
    }
    table.columns.push_back(c.get<std::string>());
  }
  for (const auto& row : j["rows"]) {
    if (!row.is_array()) {
      return MakeError(ErrorKind::kParseError, "rows must be arrays");
    }
    std::vector<Cell> cells;
    for (const auto& v : row) {
      if (v.is_null()) {
        cells.emplace_back(std::monostate{});
      } else if (v.is_number_integer()) {
        cells.emplace_back(v.get<int64_t>());
      } else if (v.is_number_float()) {
        cells.emplace_back(v.get<double>());
      } else if (v.is_string()) {
        cells.emplace_back(v.get<std::string>());
      } else if (v.is_object() && v.contains("blob_sha256") &&
                 v["blob_sha256"].is_string()) {
        cells.emplace_back(BlobDigest{v["blob_sha256"].get<std::string>()});
      } else {
        return MakeError(ErrorKind::kParseError,
                         absl::StrCat("unsupported cell value ", v.dump()));
      }
    }
    table.rows.push_back(std::move(cells));
  }
  if (!table.WellFormed()) {
    return MakeError(ErrorKind::kParseError,
                     "every row must have one cell per column");
  }
  return table;
}

}  // namespace divskill
