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

#ifndef DIVSKILL_CORE_RESULT_TABLE_H_
#define DIVSKILL_CORE_RESULT_TABLE_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace divskill {

struct BlobDigest {
  std::string sha256_hex;
  friend bool operator==(const BlobDigest&, const BlobDigest&) = default;
};

// null | integer | decimal | text | blob-digest
using Cell = std::variant<std::monostate, int64_t, double, std::string,
                          BlobDigest>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  bool WellFormed() const;
  friend bool operator==(const ResultTable&, const ResultTable&) = default;
};

// JSON form: {"columns": [...], "rows": [[cell, ...], ...]} where a cell is
// null, an integer, a float, a string, or {"blob_sha256": "<hex>"}.
nlohmann::json ResultTableToJson(const ResultTable& table);
absl::StatusOr<ResultTable> ResultTableFromJson(const nlohmann::json& j);

}  // namespace divskill

#endif  // DIVSKILL_CORE_RESULT_TABLE_H_
