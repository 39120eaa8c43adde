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


// The fixed tool set every skill-conditioned agent sees. Skills change only
// the system message; schemas and dispatch are identical across skills.
//
//   execute_sql {sql}          run against the instance database
//   lookup_docs {query}        dialect documentation snippets
//   review_sql {sql}           rule-based critique
//   get_sql_pattern {query}    pattern snippets
//   get_sql_templates {query}  template snippets
//   submit_final_sql {sql}     end the episode with an answer
//
// Snippet tools read `<tag>.txt` files from a directory and return every
// snippet whose tag occurs as a word in the query.

#ifndef DIVSKILL_AGENTS_TOOLS_H_
#define DIVSKILL_AGENTS_TOOLS_H_

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "agents/chat.h"
#include "core/types.h"
#include "exec/sqlite_runner.h"
#include "trajectory/trajectory.h"

namespace divskill::agents {

inline constexpr std::array<std::string_view, 6> kToolNames = {
    "execute_sql",     "lookup_docs",       "review_sql",
    "get_sql_pattern", "get_sql_templates", "submit_final_sql"};

const std::vector<ToolSchema>& ToolSchemas();

class SnippetStore {
 public:
  SnippetStore() = default;
  // A missing directory yields an empty store.
  static absl::StatusOr<SnippetStore> Load(const std::filesystem::path& dir);

  void Add(std::string tag, std::string text);
  std::string Lookup(std::string_view query) const;
  size_t size() const { return snippets_.size(); }

 private:
  std::map<std::string, std::string> snippets_;  // tag -> text
};

// Findings of the rule-based critic: SELECT *, non-aggregated columns absent
// from GROUP BY, unqualified columns in joins. Empty when nothing is flagged.
std::vector<std::string> ReviewSql(std::string_view sql);

struct ToolResult {
  std::string content;  // text returned to the model
  trajectory::ToolEvent event;
  bool submitted = false;
};

struct ToolBoxOptions {
  std::filesystem::path docs_dir;
  std::filesystem::path patterns_dir;
  std::filesystem::path templates_dir;
  exec::ExecLimits limits;
};

class ToolBox {
 public:
  ToolBox() = default;
  static absl::StatusOr<ToolBox> Create(const ToolBoxOptions& options);

  // MalformedToolCall for unparsable or incomplete arguments; UnknownTool for
  // names outside the fixed set.
  absl::StatusOr<ToolResult> Dispatch(const ToolCall& call,
                                      const Instance& instance) const;

 private:
  SnippetStore docs_;
  SnippetStore patterns_;
  SnippetStore templates_;
  exec::ExecLimits limits_;
};

}  // namespace divskill::agents

#endif  // DIVSKILL_AGENTS_TOOLS_H_
