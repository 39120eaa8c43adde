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


#ifndef DIVSKILL_EXEC_PREVIEW_H_
#define DIVSKILL_EXEC_PREVIEW_H_

#include <cstddef>
#include <string>

#include "exec/sqlite_runner.h"

namespace divskill::exec {

inline constexpr size_t kPreviewRows = 20;
inline constexpr size_t kPreviewCellChars = 200;

std::string CellText(const Cell& cell);

// Pipe-separated rendering of the first `max_rows` rows, each cell cut to
// `max_cell_chars`. Errors render as "ERROR <kind>: <message>".
std::string RenderPreview(const ExecOutcome& outcome,
                          size_t max_rows = kPreviewRows,
                          size_t max_cell_chars = kPreviewCellChars);

}  // namespace divskill::exec

#endif  // DIVSKILL_EXEC_PREVIEW_H_
