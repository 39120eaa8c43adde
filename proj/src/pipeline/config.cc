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


#include "pipeline/config.h"

#include <map>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "core/errors.h"
#include "core/util.h"
#include "toml.hpp"

namespace divskill::pipeline {
namespace {

nlohmann::json NodeToJson(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [key, value] : *t) out[std::string(key.str())] = NodeToJson(value);
    return out;
  }
  if (const auto* a = node.as_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& value : *a) out.push_back(NodeToJson(value));
    return out;
  }
  if (const auto* v = node.as_string()) return v->get();
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  std::ostringstream ss;
  node.visit([&ss](const auto& v) { ss << v; });
  return ss.str();
}

absl::Status ConfigError(const std::string& what) {
  return MakeError(ErrorKind::kConfigError, what);
}

// Reads typed fields from one section and remembers which keys were used.
class Section {
 public:
  Section(const nlohmann::json& all, std::string name) : name_(std::move(name)) {
    if (all.contains(name_)) node_ = all[name_];
  }

  absl::Status Check() const {
    if (node_.is_null()) return absl::OkStatus();
    if (!node_.is_object()) return ConfigError(absl::StrCat("[", name_, "] must be a table"));
    for (const auto& [key, value] : node_.items()) {
      if (!used_.count(key)) {
        return ConfigError(absl::StrCat("unknown key '", key, "' in [", name_, "]"));
      }
    }
    return status_;
  }

  template <typename T>
  void Get(const std::string& key, T& out) {
    used_.insert(key);
    if (node_.is_null() || !node_.is_object() || !node_.contains(key)) return;
    const nlohmann::json& v = node_[key];
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) return Fail(key, "a boolean");
      out = v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) return Fail(key, "an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<int64_t>() < 0) {
          return Fail(key, "a non-negative integer");
        }
      }
      out = v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) return Fail(key, "a number");
      out = v.get<T>();
    } else {
      if (!v.is_string()) return Fail(key, "a string");
      out = v.get<std::string>();
    }
  }

  template <typename T>
  void GetOptional(const std::string& key, std::optional<T>& out) {
    used_.insert(key);
    if (node_.is_null() || !node_.is_object() || !node_.contains(key) ||
        node_[key].is_null()) {
      return;
    }
    T value{};
    Get(key, value);
    out = value;
  }

  void GetStrings(const std::string& key, std::optional<std::set<std::string>>& out) {
    used_.insert(key);
    if (node_.is_null() || !node_.is_object() || !node_.contains(key)) return;
    const nlohmann::json& v = node_[key];
    if (!v.is_array()) return Fail(key, "an array of strings");
    std::set<std::string> words;
    for (const auto& w : v) {
      if (!w.is_string()) return Fail(key, "an array of strings");
      words.insert(w.get<std::string>());
    }
    out = std::move(words);
  }

 private:
  void Fail(const std::string& key, const char* expected) {
    if (status_.ok()) {
      status_ = ConfigError(absl::StrCat("[", name_, "] ", key, " must be ", expected));
    }
  }

  std::string name_;
  nlohmann::json node_;
  std::set<std::string> used_;
  absl::Status status_;
};

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

absl::StatusOr<nlohmann::json> TomlToJson(const std::string& text,
                                          const std::string& source) {
  try {
    toml::table table = toml::parse(text, source);
    return NodeToJson(table);
  } catch (const toml::parse_error& e) {
    std::ostringstream ss;
    ss << e.description() << " at " << e.source().begin;
    return MakeError(ErrorKind::kConfigError, absl::StrCat(source, ": ", ss.str()));
  }
}

absl::Status CliConfig::Validate() const {
  if (K.has_value() && *K <= 0) return ConfigError("run.K must be positive");
  if (T < 0) return ConfigError("run.T must be non-negative");
  if (b <= 0) return ConfigError("run.b must be positive");
  if (n_eval <= 0) return ConfigError("run.n_eval must be positive");
  if (max_prompt_len == 0) return ConfigError("run.max_prompt_len must be positive");
  if (rotation_stride.has_value() && *rotation_stride <= 0) {
    return ConfigError("run.rotation_stride must be positive");
  }
  if (jobs <= 0) return ConfigError("run.jobs must be positive");
  DIVSKILL_RETURN_IF_ERROR(budgets.Validate());
  if (!match.Valid()) return ConfigError("match.float_sig_digits must be at least 1");
  if (limits.timeout_s <= 0 || limits.max_rows <= 0) {
    return ConfigError("exec.timeout_s and exec.max_rows must be positive");
  }
  if (llm.max_attempts <= 0 || llm.judge_max_attempts <= 0 || llm.timeout_s <= 0 ||
      llm.initial_backoff_ms < 0) {
    return ConfigError("llm retry settings must be positive");
  }
  if (!(synthetic_noise >= 0.0 && synthetic_noise < 1.0)) {
    return ConfigError("synthetic.noise must be in [0, 1)");
  }
  return absl::OkStatus();
}

absl::StatusOr<CliConfig> ConfigFromJson(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir) {
  if (!j.is_object()) return ConfigError("configuration must be a table");
  static const std::set<std::string> kSections = {
      "run", "budgets", "match", "exec", "llm", "paths", "screen", "synthetic"};
  for (const auto& [key, value] : j.items()) {
    if (!kSections.count(key)) return ConfigError(absl::StrCat("unknown section [", key, "]"));
  }
  CliConfig c;
  Section run(j, "run");
  run.GetOptional("K", c.K);
  run.Get("T", c.T);
  run.Get("b", c.b);
  run.Get("n_eval", c.n_eval);
  run.Get("max_prompt_len", c.max_prompt_len);
  run.GetOptional("rng_seed", c.rng_seed);
  run.GetOptional("rotation_stride", c.rotation_stride);
  run.Get("jobs", c.jobs);

  Section budgets(j, "budgets");
  budgets.Get("max_turns", c.budgets.max_turns);
  budgets.Get("max_sql_execs", c.budgets.max_sql_execs);
  budgets.Get("max_completion_tokens", c.budgets.max_completion_tokens);
  budgets.Get("temperature", c.budgets.temperature);

  Section match(j, "match");
  match.Get("row_order_sensitive", c.match.row_order_sensitive);
  match.Get("float_sig_digits", c.match.float_sig_digits);
  match.Get("null_token", c.match.null_token);

  Section ex(j, "exec");
  ex.Get("timeout_s", c.limits.timeout_s);
  ex.Get("max_rows", c.limits.max_rows);
  std::string cache_dir;
  ex.Get("gold_cache_dir", cache_dir);
  if (!cache_dir.empty()) c.gold_cache_dir = Resolve(base_dir, cache_dir);

  Section llm(j, "llm");
  llm.Get("base_url", c.llm.base_url);
  llm.Get("model", c.llm.model);
  llm.Get("judge_model", c.llm.judge_model);
  llm.Get("optimizer_model", c.llm.optimizer_model);
  llm.Get("max_attempts", c.llm.max_attempts);
  llm.Get("initial_backoff_ms", c.llm.initial_backoff_ms);
  llm.Get("timeout_s", c.llm.timeout_s);
  llm.Get("judge_max_attempts", c.llm.judge_max_attempts);
  if (c.llm.judge_model.empty()) c.llm.judge_model = c.llm.model;
  if (c.llm.optimizer_model.empty()) c.llm.optimizer_model = c.llm.model;

  Section paths(j, "paths");
  std::string seed_pool, docs, patterns, templates;
  paths.Get("seed_pool", seed_pool);
  paths.Get("docs_dir", docs);
  paths.Get("patterns_dir", patterns);
  paths.Get("templates_dir", templates);
  if (!seed_pool.empty()) c.seed_pool = Resolve(base_dir, seed_pool);
  c.docs_dir = Resolve(base_dir, docs);
  c.patterns_dir = Resolve(base_dir, patterns);
  c.templates_dir = Resolve(base_dir, templates);

  Section screen(j, "screen");
  screen.GetStrings("dialect_denylist", c.dialect_denylist);

  Section synthetic(j, "synthetic");
  synthetic.Get("noise", c.synthetic_noise);

  for (const Section* s : {&run, &budgets, &match, &ex, &llm, &paths, &screen, &synthetic}) {
    DIVSKILL_RETURN_IF_ERROR(s->Check());
  }
  DIVSKILL_RETURN_IF_ERROR(c.Validate());
  return c;
}

absl::StatusOr<CliConfig> LoadConfig(const std::filesystem::path& path,
                                     const std::string& overrides) {
  nlohmann::json j = nlohmann::json::object();
  std::filesystem::path base;
  if (!path.empty()) {
    DIVSKILL_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
    DIVSKILL_ASSIGN_OR_RETURN(j, TomlToJson(text, path.string()));
    base = path.parent_path();
  }
  if (!overrides.empty()) {
    nlohmann::json patch = nlohmann::json::parse(overrides, nullptr, false);
    if (patch.is_discarded() || !patch.is_object()) {
      return ConfigError("--set must be a JSON object");
    }
    j.merge_patch(patch);
  }
  return ConfigFromJson(j, base);
}

nlohmann::json ConfigToJson(const CliConfig& c) {
  auto opt = [](const auto& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
  auto path = [](const std::filesystem::path& p) { return p.string(); };
  return {
      {"run",
       {{"K", opt(c.K)},
        {"T", c.T},
        {"b", c.b},
        {"n_eval", c.n_eval},
        {"max_prompt_len", c.max_prompt_len},
        {"rng_seed", opt(c.rng_seed)},
        {"rotation_stride", opt(c.rotation_stride)},
        {"jobs", c.jobs}}},
      {"budgets",
       {{"max_turns", c.budgets.max_turns},
        {"max_sql_execs", c.budgets.max_sql_execs},
        {"max_completion_tokens", c.budgets.max_completion_tokens},
        {"temperature", c.budgets.temperature}}},
      {"match",
       {{"row_order_sensitive", c.match.row_order_sensitive},
        {"float_sig_digits", c.match.float_sig_digits},
        {"null_token", c.match.null_token}}},
      {"exec",
       {{"timeout_s", c.limits.timeout_s},
        {"max_rows", c.limits.max_rows},
        {"gold_cache_dir", c.gold_cache_dir ? path(*c.gold_cache_dir) : ""}}},
      {"llm",
       {{"base_url", c.llm.base_url},
        {"model", c.llm.model},
        {"judge_model", c.llm.judge_model},
        {"optimizer_model", c.llm.optimizer_model},
        {"max_attempts", c.llm.max_attempts},
        {"initial_backoff_ms", c.llm.initial_backoff_ms},
        {"timeout_s", c.llm.timeout_s},
        {"judge_max_attempts", c.llm.judge_max_attempts}}},
      {"paths",
       {{"seed_pool", c.seed_pool ? path(*c.seed_pool) : ""},
        {"docs_dir", path(c.docs_dir)},
        {"patterns_dir", path(c.patterns_dir)},
        {"templates_dir", path(c.templates_dir)}}},
      {"screen",
       {{"dialect_denylist",
         c.dialect_denylist ? nlohmann::json(std::vector<std::string>(
                                  c.dialect_denylist->begin(), c.dialect_denylist->end()))
                            : nlohmann::json()}}},
      {"synthetic", {{"noise", c.synthetic_noise}}}};
}

}  // namespace divskill::pipeline
