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


#include "exec/preview.h"

#include <cstdio>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace divskill::exec {

std::string CellText(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "NULL";
        } else if constexpr (std::is_same_v<T, int64_t>) {
          return absl::StrCat(v);
        } else if constexpr (std::is_same_v<T, double>) {
          char buf[40];
          std::snprintf(buf, sizeof(buf), "%.15g", v);
          return buf;
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else {
          return absl::StrCat("<blob sha256=", v.sha256_hex, ">");
        }
      },
      cell);
}

std::string RenderPreview(const ExecOutcome& outcome, size_t max_rows,
                          size_t max_cell_chars) {
  if (IsError(outcome)) {
    const ExecError& err = std::get<ExecError>(outcome);
    return absl::StrCat("ERROR ", std::string(ExecErrorKindName(err.kind)), ": ",
                        err.message);
  }
  const ResultTable& table = std::get<ResultTable>(outcome);
  std::string out = absl::StrCat(absl::StrJoin(table.columns, " | "), "\n");
  const size_t shown = std::min(max_rows, table.rows.size());
  for (size_t r = 0; r < shown; ++r) {
    std::vector<std::string> cells;
    for (const Cell& cell : table.rows[r]) {
      std::string text = CellText(cell);
      if (text.size() > max_cell_chars) {
        text = absl::StrCat(text.substr(0, max_cell_chars), "...");
      }
      cells.push_back(std::move(text));
    }
    absl::StrAppend(&out, absl::StrJoin(cells, " | "), "\n");
  }
  absl::StrAppend(&out, "(", table.rows.size(), " rows",
                  shown < table.rows.size() ? absl::StrCat(", showing ", shown) : "",
                  ")");
  return out;
}

}  // namespace divskill::exec
