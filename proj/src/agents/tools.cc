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


#include "agents/tools.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "core/errors.h"
#include "exec/preview.h"

namespace divskill::agents {
namespace {

nlohmann::json StringParam(const char* name, const char* description) {
  return {{"type", "object"},
          {"properties", {{name, {{"type", "string"}, {"description", description}}}}},
          {"required", {name}}};
}

std::set<std::string> Words(std::string_view text) {
  std::set<std::string> out;
  std::string cur;
  for (char c : text) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '_') {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (!cur.empty()) {
      out.insert(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.insert(std::move(cur));
  return out;
}

// Splits on commas outside parentheses and quotes.
std::vector<std::string> SplitTopLevel(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  char quote = 0;
  for (char c : text) {
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '\'' || c == '"' || c == '`') {
      quote = c;
    } else if (c == '(') {
      ++depth;
    } else if (c == ')') {
      --depth;
    } else if (c == ',' && depth == 0) {
      parts.emplace_back(absl::StripAsciiWhitespace(cur));
      cur.clear();
      continue;
    }
    cur.push_back(c);
  }
  if (!absl::StripAsciiWhitespace(cur).empty()) {
    parts.emplace_back(absl::StripAsciiWhitespace(cur));
  }
  return parts;
}

// Position of keyword `kw` at parenthesis depth 0 in lower-cased `s`, at or
// after `from`, on word boundaries.
size_t FindTopLevel(const std::string& s, std::string_view kw, size_t from = 0) {
  int depth = 0;
  char quote = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quote) {
      if (c == quote) quote = 0;
      continue;
    }
    if (c == '\'' || c == '"' || c == '`') {
      quote = c;
    } else if (c == '(') {
      ++depth;
    } else if (c == ')') {
      --depth;
    } else if (depth == 0 && i >= from && s.compare(i, kw.size(), kw) == 0) {
      const bool left = i == 0 || !(std::isalnum(static_cast<unsigned char>(s[i - 1])) || s[i - 1] == '_');
      const size_t end = i + kw.size();
      const bool right = end >= s.size() || !(std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_');
      if (left && right) return i;
    }
  }
  return std::string::npos;
}

const std::regex& AliasRe() {
  static const std::regex re(R"(^(.*\S)\s+(as\s+)?[a-z_][a-z0-9_]*$)",
                             std::regex::icase);
  return re;
}

const std::regex& BareColumnRe() {
  static const std::regex re(R"(^([a-z_][a-z0-9_]*\.)?[a-z_][a-z0-9_]*$)",
                             std::regex::icase);
  return re;
}

const std::regex& AggregateRe() {
  static const std::regex re(
      R"(\b(count|sum|avg|min|max|total|group_concat|string_agg|array_agg)\s*\()",
      std::regex::icase);
  return re;
}

std::string LastComponent(const std::string& column) {
  const size_t dot = column.rfind('.');
  return dot == std::string::npos ? column : column.substr(dot + 1);
}

}  // namespace

const std::vector<ToolSchema>& ToolSchemas() {
  static const std::vector<ToolSchema> schemas = {
      {"execute_sql", "Run a SQL query against the live database and return a preview.",
       StringParam("sql", "SQL query to execute")},
      {"lookup_docs", "Look up SQL dialect documentation.",
       StringParam("query", "Topic to look up")},
      {"review_sql", "Critique a SQL query for common mistakes.",
       StringParam("sql", "SQL query to review")},
      {"get_sql_pattern", "Retrieve a reusable SQL pattern.",
       StringParam("query", "Pattern topic")},
      {"get_sql_templates", "Retrieve SQL query templates.",
       StringParam("query", "Template topic")},
      {"submit_final_sql", "Submit the final SQL answer and stop.",
       StringParam("sql", "Final SQL query")},
  };
  return schemas;
}

absl::StatusOr<SnippetStore> SnippetStore::Load(const std::filesystem::path& dir) {
  SnippetStore store;
  std::error_code ec;
  if (dir.empty() || !std::filesystem::is_directory(dir, ec)) return store;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    std::ifstream in(entry.path());
    if (!in) {
      return MakeError(ErrorKind::kIoError,
                       absl::StrCat("cannot read ", entry.path().string()));
    }
    std::stringstream buf;
    buf << in.rdbuf();
    store.Add(entry.path().stem().string(), buf.str());
  }
  if (ec) return MakeError(ErrorKind::kIoError, ec.message());
  return store;
}

void SnippetStore::Add(std::string tag, std::string text) {
  snippets_[absl::AsciiStrToLower(tag)] = std::move(text);
}

std::string SnippetStore::Lookup(std::string_view query) const {
  const std::set<std::string> words = Words(query);
  std::vector<std::string> hits;
  for (const auto& [tag, text] : snippets_) {
    if (words.count(tag)) hits.push_back(absl::StrCat("[", tag, "]\n", text));
  }
  if (hits.empty()) return "no matching snippet";
  return absl::StrJoin(hits, "\n\n");
}

std::vector<std::string> ReviewSql(std::string_view sql) {
  std::vector<std::string> findings;
  const std::string lower = absl::AsciiStrToLower(std::string(sql));
  const size_t select = FindTopLevel(lower, "select");
  if (select == std::string::npos) return {"no top-level SELECT found"};
  const size_t from = FindTopLevel(lower, "from", select);
  const size_t list_end = from == std::string::npos ? lower.size() : from;
  std::string list = lower.substr(select + 6, list_end - select - 6);
  list = std::string(absl::StripAsciiWhitespace(list));
  if (absl::StartsWith(list, "distinct ")) list = list.substr(9);

  const std::vector<std::string> items = SplitTopLevel(list);
  std::vector<std::string> bare;
  bool has_aggregate = false;
  for (std::string item : items) {
    if (item == "*" || absl::EndsWith(item, ".*")) {
      findings.push_back("SELECT * returns unneeded columns; list the columns explicitly");
      continue;
    }
    if (std::regex_search(item, AggregateRe())) {
      has_aggregate = true;
      continue;
    }
    std::smatch m;
    if (!std::regex_match(item, BareColumnRe()) &&
        std::regex_match(item, m, AliasRe())) {
      item = m[1].str();
    }
    if (std::regex_match(item, BareColumnRe())) bare.push_back(item);
  }

  const size_t group = FindTopLevel(lower, "group", list_end);
  if (has_aggregate && !bare.empty()) {
    std::vector<std::string> keys;
    if (group != std::string::npos) {
      const size_t by = lower.find("by", group);
      size_t end = lower.size();
      for (std::string_view stop : {"having", "order", "limit", "window"}) {
        end = std::min(end, FindTopLevel(lower, stop, by));
      }
      keys = SplitTopLevel(lower.substr(by + 2, end - by - 2));
    }
    for (size_t i = 0; i < bare.size(); ++i) {
      const bool grouped = std::any_of(keys.begin(), keys.end(), [&](const std::string& k) {
        return k == bare[i] || LastComponent(k) == LastComponent(bare[i]);
      });
      if (grouped) continue;
      findings.push_back(group == std::string::npos
                             ? absl::StrCat("column ", bare[i],
                                            " is not aggregated and there is no GROUP BY")
                             : absl::StrCat("column ", bare[i], " is missing from GROUP BY"));
    }
  }

  if (FindTopLevel(lower, "join") != std::string::npos) {
    for (const std::string& col : bare) {
      if (col.find('.') == std::string::npos) {
        findings.push_back(absl::StrCat("column ", col,
                                        " is unqualified in a join; prefix it with its table"));
      }
    }
  }
  return findings;
}

absl::StatusOr<ToolBox> ToolBox::Create(const ToolBoxOptions& options) {
  ToolBox box;
  DIVSKILL_ASSIGN_OR_RETURN(box.docs_, SnippetStore::Load(options.docs_dir));
  DIVSKILL_ASSIGN_OR_RETURN(box.patterns_, SnippetStore::Load(options.patterns_dir));
  DIVSKILL_ASSIGN_OR_RETURN(box.templates_, SnippetStore::Load(options.templates_dir));
  box.limits_ = options.limits;
  return box;
}

absl::StatusOr<ToolResult> ToolBox::Dispatch(const ToolCall& call,
                                             const Instance& instance) const {
  using trajectory::ToolEvent;
  if (std::find(kToolNames.begin(), kToolNames.end(), call.name) == kToolNames.end()) {
    return MakeError(ErrorKind::kUnknownTool,
                     absl::StrCat("tool '", call.name, "' is not in the tool set"));
  }
  nlohmann::json args = nlohmann::json::parse(call.arguments, nullptr, false);
  const bool takes_sql = call.name == "execute_sql" || call.name == "review_sql" ||
                         call.name == "submit_final_sql";
  const char* key = takes_sql ? "sql" : "query";
  if (args.is_discarded() || !args.is_object() || !args.contains(key) ||
      !args[key].is_string()) {
    return MakeError(ErrorKind::kMalformedToolCall,
                     absl::StrCat(call.name, " expects a JSON object with string field '",
                                  key, "'"));
  }
  const std::string arg = args[key].get<std::string>();

  ToolResult result;
  result.event = {ToolEvent::Kind::kToolCall, call.name, takes_sql ? arg : "", false};
  if (call.name == "execute_sql") {
    const exec::ExecOutcome outcome = exec::ExecuteSql(instance.db_ref, arg, limits_);
    result.event.exec_error = exec::IsError(outcome);
    result.content = exec::RenderPreview(outcome);
  } else if (call.name == "review_sql") {
    const std::vector<std::string> findings = ReviewSql(arg);
    result.content = findings.empty() ? "no issues found"
                                      : absl::StrJoin(findings, "\n");
  } else if (call.name == "lookup_docs") {
    result.content = docs_.Lookup(arg);
  } else if (call.name == "get_sql_pattern") {
    result.content = patterns_.Lookup(arg);
  } else if (call.name == "get_sql_templates") {
    result.content = templates_.Lookup(arg);
  } else {
    result.submitted = true;
    result.content = "submitted";
  }
  return result;
}

}  // namespace divskill::agents
