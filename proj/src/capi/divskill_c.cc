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


#include "divskill/divskill.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "core/errors.h"
#include "core/outcome_matrix.h"
#include "core/result_table.h"
#include "exec/canonical.h"
#include "exec/sqlite_runner.h"
#include "greedy/population.h"
#include "json.hpp"
#include "metrics/metrics.h"
#include "pipeline/commands.h"
#include "trajectory/trajectory.h"

struct ds_context {
  int jobs = 0;
};

struct ds_population {
  divskill::greedy::PopulationMatrix matrix;
};

struct ds_outcome_matrix {
  divskill::OutcomeMatrix matrix;
};

namespace {

using divskill::ErrorKind;
using nlohmann::json;

thread_local std::string g_last_error;

ds_status Fail(ds_status code, std::string message) {
  g_last_error = std::move(message);
  return code;
}

ds_status FromStatus(const absl::Status& status) {
  if (status.ok()) {
    g_last_error.clear();
    return DS_OK;
  }
  const ErrorKind kind = divskill::KindOf(status);
  g_last_error = std::string(status.message());
  return static_cast<ds_status>(static_cast<int>(kind));
}

// Runs `fn` with every exception turned into DS_ERR_INTERNAL.
ds_status Guard(const std::function<ds_status()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return Fail(DS_ERR_INTERNAL, absl::StrCat("internal error: ", e.what()));
  } catch (...) {
    return Fail(DS_ERR_INTERNAL, "internal error");
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ds_status Ok() {
  g_last_error.clear();
  return DS_OK;
}

absl::StatusOr<json> ParseArgs(const char* args_json) {
  if (args_json == nullptr) return json::object();
  json j = json::parse(args_json, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return divskill::MakeError(ErrorKind::kInvalidArgument, "arguments must be a JSON object");
  }
  return j;
}

// Typed accessors that reject wrong types and remember the keys seen.
class Args {
 public:
  explicit Args(json j) : j_(std::move(j)) {}

  std::string Str(const char* key, std::string fallback = {}) {
    seen_.push_back(key);
    if (!j_.contains(key) || j_[key].is_null()) return fallback;
    if (!j_[key].is_string()) Bad(key, "a string");
    return j_[key].is_string() ? j_[key].get<std::string>() : fallback;
  }

  std::optional<std::string> OptStr(const char* key) {
    std::string v = Str(key);
    if (v.empty()) return std::nullopt;
    return v;
  }

  template <typename T>
  T Num(const char* key, T fallback) {
    seen_.push_back(key);
    if (!j_.contains(key) || j_[key].is_null()) return fallback;
    if constexpr (std::is_integral_v<T>) {
      if (!j_[key].is_number_integer()) {
        Bad(key, "an integer");
        return fallback;
      }
    } else if (!j_[key].is_number()) {
      Bad(key, "a number");
      return fallback;
    }
    return j_[key].get<T>();
  }

  absl::Status Finish() const {
    if (!status_.ok()) return status_;
    for (const auto& [key, value] : j_.items()) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        return divskill::MakeError(ErrorKind::kInvalidArgument,
                                   absl::StrCat("unknown argument '", key, "'"));
      }
    }
    return absl::OkStatus();
  }

 private:
  void Bad(const char* key, const char* what) {
    if (status_.ok()) {
      status_ = divskill::MakeError(ErrorKind::kInvalidArgument,
                                    absl::StrCat("argument '", key, "' must be ", what));
    }
  }

  json j_;
  std::vector<std::string> seen_;
  absl::Status status_;
};

divskill::pipeline::CommonArgs Common(Args& a, const ds_context* ctx) {
  divskill::pipeline::CommonArgs c;
  c.config = a.Str("config");
  c.overrides = a.Str("set");
  const int jobs = a.Num<int>("jobs", 0);
  if (jobs > 0) {
    c.jobs = jobs;
  } else if (ctx != nullptr && ctx->jobs > 0) {
    c.jobs = ctx->jobs;
  }
  return c;
}

ds_status Report(const absl::StatusOr<json>& report, char** out) {
  if (!report.ok()) return FromStatus(report.status());
  if (out != nullptr) *out = Dup(report->dump(2));
  return Ok();
}

template <typename Build, typename Run>
ds_status Command(ds_context* ctx, const char* args_json, char** report_json, Build build,
                  Run run) {
  return Guard([&]() -> ds_status {
    auto parsed = ParseArgs(args_json);
    if (!parsed.ok()) return FromStatus(parsed.status());
    Args a(*std::move(parsed));
    auto args = build(a, ctx);
    if (!args.ok()) return FromStatus(args.status());
    absl::Status done = a.Finish();
    if (!done.ok()) return FromStatus(done);
    return Report(run(*args), report_json);
  });
}

absl::StatusOr<std::vector<divskill::trajectory::Action>> Actions(const int* codes, size_t n) {
  if (codes == nullptr && n > 0) {
    return divskill::MakeError(ErrorKind::kInvalidArgument, "null action array");
  }
  std::vector<divskill::trajectory::Action> out;
  for (size_t i = 0; i < n; ++i) {
    if (codes[i] < 0 || codes[i] >= divskill::trajectory::kNumActions) {
      return divskill::MakeError(ErrorKind::kInvalidArgument,
                                 absl::StrCat("action code ", codes[i], " out of range"));
    }
    out.push_back(static_cast<divskill::trajectory::Action>(codes[i]));
  }
  return out;
}

absl::StatusOr<divskill::ResultTable> TableArg(const char* text) {
  if (text == nullptr) {
    return divskill::MakeError(ErrorKind::kInvalidArgument, "null table");
  }
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    return divskill::MakeError(ErrorKind::kParseError, "table is not valid JSON");
  }
  return divskill::ResultTableFromJson(j);
}

std::span<const size_t> Span(const size_t* data, size_t n) {
  return n == 0 ? std::span<const size_t>() : std::span<const size_t>(data, n);
}

}  // namespace

extern "C" {

const char* ds_version(void) { return "0.1.0"; }

const char* ds_status_name(ds_status status) {
  static thread_local std::string name;
  name = std::string(divskill::ErrorKindName(static_cast<ErrorKind>(status)));
  return name.c_str();
}

const char* ds_last_error(void) { return g_last_error.c_str(); }

void ds_string_free(char* s) { std::free(s); }

ds_status ds_context_create(ds_context** out) {
  return Guard([&] {
    if (out == nullptr) return Fail(DS_ERR_INVALID_ARGUMENT, "null out pointer");
    *out = new ds_context();
    return Ok();
  });
}

void ds_context_free(ds_context* ctx) { delete ctx; }

ds_status ds_context_set_jobs(ds_context* ctx, int jobs) {
  if (ctx == nullptr) return Fail(DS_ERR_INVALID_ARGUMENT, "null context");
  if (jobs < 0) return Fail(DS_ERR_INVALID_ARGUMENT, "jobs must be non-negative");
  ctx->jobs = jobs;
  return Ok();
}

ds_status ds_optimize(ds_context* ctx, const char* args_json, char** report_json) {
  using namespace divskill::pipeline;
  return Command(
      ctx, args_json, report_json,
      [](Args& a, const ds_context* c) -> absl::StatusOr<OptimizeArgs> {
        OptimizeArgs o;
        o.common = Common(a, c);
        o.train = a.Str("train");
        if (auto seeds = a.OptStr("seeds")) o.seed_pool = *seeds;
        auto ex = ParseExecutorKind(a.Str("executor", "sim"));
        if (!ex.ok()) return ex.status();
        o.executor = *ex;
        auto opt = ParseOptimizerKind(a.Str("optimizer", "mutate"));
        if (!opt.ok()) return opt.status();
        o.optimizer = *opt;
        o.out_dir = a.Str("out");
        if (o.train.empty() || o.out_dir.empty()) {
          return divskill::MakeError(ErrorKind::kInvalidArgument, "train and out are required");
        }
        return o;
      },
      RunOptimizeCommand);
}

ds_status ds_infer(ds_context* ctx, const char* args_json, char** report_json) {
  using namespace divskill::pipeline;
  return Command(
      ctx, args_json, report_json,
      [](Args& a, const ds_context* c) -> absl::StatusOr<InferArgs> {
        InferArgs o;
        o.common = Common(a, c);
        o.pool = a.Str("pool");
        o.dataset = a.Str("dataset");
        auto ex = ParseExecutorKind(a.Str("executor", "sim"));
        if (!ex.ok()) return ex.status();
        o.executor = *ex;
        auto judge = ParseJudgeKind(a.Str("judge", "oracle"));
        if (!judge.ok()) return judge.status();
        o.judge = *judge;
        o.out = a.Str("out");
        if (o.pool.empty() || o.dataset.empty() || o.out.empty()) {
          return divskill::MakeError(ErrorKind::kInvalidArgument,
                                     "pool, dataset and out are required");
        }
        return o;
      },
      RunInferCommand);
}

ds_status ds_evaluate(ds_context* ctx, const char* args_json, char** report_json) {
  using namespace divskill::pipeline;
  return Command(
      ctx, args_json, report_json,
      [](Args& a, const ds_context* c) -> absl::StatusOr<EvaluateArgs> {
        EvaluateArgs o;
        o.common = Common(a, c);
        o.selections = a.Str("selections");
        o.dataset = a.Str("dataset");
        if (auto cands = a.OptStr("candidates")) o.candidates = *cands;
        if (auto out = a.OptStr("out")) o.out = *out;
        if (o.selections.empty() || o.dataset.empty()) {
          return divskill::MakeError(ErrorKind::kInvalidArgument,
                                     "selections and dataset are required");
        }
        return o;
      },
      RunEvaluateCommand);
}

ds_status ds_verify_greedy(ds_context* ctx, const char* args_json, char** report_json) {
  using namespace divskill::pipeline;
  return Command(
      ctx, args_json, report_json,
      [](Args& a, const ds_context*) -> absl::StatusOr<VerifyGreedyArgs> {
        VerifyGreedyArgs o;
        o.skills = a.Num<int>("skills", o.skills);
        o.instances = a.Num<int>("instances", o.instances);
        o.k = a.Num<int>("k", o.k);
        o.trials = a.Num<int>("trials", o.trials);
        o.seed = a.Num<uint64_t>("seed", o.seed);
        if (auto out = a.OptStr("out")) o.out = *out;
        return o;
      },
      RunVerifyGreedyCommand);
}

ds_status ds_analyze_trajectories(ds_context* ctx, const char* args_json, char** report_json) {
  using namespace divskill::pipeline;
  return Command(
      ctx, args_json, report_json,
      [](Args& a, const ds_context*) -> absl::StatusOr<AnalyzeArgs> {
        AnalyzeArgs o;
        o.runs = a.Str("runs");
        if (auto out = a.OptStr("out")) o.out = *out;
        if (o.runs.empty()) {
          return divskill::MakeError(ErrorKind::kInvalidArgument, "runs is required");
        }
        return o;
      },
      RunAnalyzeCommand);
}

ds_status ds_simulate(ds_context* ctx, const char* args_json, char** report_json) {
  using namespace divskill::pipeline;
  return Command(
      ctx, args_json, report_json,
      [](Args& a, const ds_context*) -> absl::StatusOr<SimulateArgs> {
        SimulateArgs o;
        o.out_dir = a.Str("out");
        o.seed = a.Num<uint64_t>("seed", o.seed);
        o.capabilities = a.Num<int>("capabilities", o.capabilities);
        o.train = a.Num<int>("train", o.train);
        o.heldout = a.Num<int>("heldout", o.heldout);
        o.noise = a.Num<double>("noise", o.noise);
        o.T = a.Num<int>("T", o.T);
        o.b = a.Num<int>("b", o.b);
        if (o.out_dir.empty()) {
          return divskill::MakeError(ErrorKind::kInvalidArgument, "out is required");
        }
        return o;
      },
      RunSimulateCommand);
}

ds_status ds_population_create(size_t num_skills, size_t num_instances, const double* p,
                               const double* weights, ds_population** out) {
  return Guard([&] {
    if (out == nullptr || (p == nullptr && num_skills * num_instances > 0)) {
      return Fail(DS_ERR_INVALID_ARGUMENT, "null argument");
    }
    std::vector<double> pv(p, p + num_skills * num_instances);
    std::vector<double> wv;
    if (weights != nullptr) wv.assign(weights, weights + num_instances);
    auto pm = divskill::greedy::PopulationMatrix::Create(num_skills, num_instances,
                                                         std::move(pv), std::move(wv));
    if (!pm.ok()) return FromStatus(pm.status());
    *out = new ds_population{*std::move(pm)};
    return Ok();
  });
}

void ds_population_free(ds_population* pop) { delete pop; }

ds_status ds_population_objective(const ds_population* pop, const size_t* subset,
                                  size_t subset_len, double* out) {
  return Guard([&] {
    if (pop == nullptr || out == nullptr || (subset == nullptr && subset_len > 0)) {
      return Fail(DS_ERR_INVALID_ARGUMENT, "null argument");
    }
    auto v = divskill::greedy::Objective(pop->matrix, Span(subset, subset_len));
    if (!v.ok()) return FromStatus(v.status());
    *out = *v;
    return Ok();
  });
}

ds_status ds_population_marginal_gain(const ds_population* pop, size_t skill,
                                      const size_t* subset, size_t subset_len, double* out) {
  return Guard([&] {
    if (pop == nullptr || out == nullptr || (subset == nullptr && subset_len > 0)) {
      return Fail(DS_ERR_INVALID_ARGUMENT, "null argument");
    }
    auto v = divskill::greedy::MarginalGain(pop->matrix, skill, Span(subset, subset_len));
    if (!v.ok()) return FromStatus(v.status());
    *out = *v;
    return Ok();
  });
}

ds_status ds_population_greedy(const ds_population* pop, size_t k, size_t* order,
                               double* value) {
  return Guard([&] {
    if (pop == nullptr || order == nullptr) return Fail(DS_ERR_INVALID_ARGUMENT, "null argument");
    auto sel = divskill::greedy::GreedySelect(pop->matrix, k);
    if (!sel.ok()) return FromStatus(sel.status());
    std::copy(sel->begin(), sel->end(), order);
    if (value != nullptr) {
      auto v = divskill::greedy::Objective(pop->matrix, *sel);
      if (!v.ok()) return FromStatus(v.status());
      *value = *v;
    }
    return Ok();
  });
}

ds_status ds_population_brute_force(const ds_population* pop, size_t k, size_t* subset,
                                    size_t* subset_len, double* value) {
  return Guard([&] {
    if (pop == nullptr || subset == nullptr || subset_len == nullptr) {
      return Fail(DS_ERR_INVALID_ARGUMENT, "null argument");
    }
    auto best = divskill::greedy::BruteForceBest(pop->matrix, k);
    if (!best.ok()) return FromStatus(best.status());
    std::copy(best->subset.begin(), best->subset.end(), subset);
    *subset_len = best->subset.size();
    if (value != nullptr) *value = best->value;
    return Ok();
  });
}

ds_status ds_population_check_guarantee(const ds_population* pop, size_t k,
                                        char** report_json) {
  return Guard([&] {
    if (pop == nullptr || report_json == nullptr) {
      return Fail(DS_ERR_INVALID_ARGUMENT, "null argument");
    }
    auto r = divskill::greedy::CheckGuarantee(pop->matrix, k);
    if (!r.ok()) return FromStatus(r.status());
    const json j = {{"greedy_order", r->greedy_order}, {"optimum", r->optimum},
                    {"greedy_value", r->greedy_value}, {"opt_value", r->opt_value},
                    {"ratio", r->ratio},               {"holds", r->holds},
                    {"recurrence_holds", r->recurrence_holds}};
    *report_json = Dup(j.dump());
    return Ok();
  });
}

ds_status ds_pass_at_k_exact(size_t n, size_t failures, size_t k, int64_t* num, int64_t* den) {
  return Guard([&] {
    if (num == nullptr || den == nullptr) return Fail(DS_ERR_INVALID_ARGUMENT, "null argument");
    auto r = divskill::metrics::PassAtKExact(n, failures, k);
    if (!r.ok()) return FromStatus(r.status());
    *num = r->num();
    *den = r->den();
    return Ok();
  });
}

ds_status ds_pass_at_k(const int* successes, size_t n, size_t k, double* out) {
  return Guard([&] {
    if (out == nullptr || (successes == nullptr && n > 0)) {
      return Fail(DS_ERR_INVALID_ARGUMENT, "null argument");
    }
    std::vector<bool> v;
    for (size_t i = 0; i < n; ++i) v.push_back(successes[i] != 0);
    auto r = divskill::metrics::PassAtK(v, k);
    if (!r.ok()) return FromStatus(r.status());
    *out = *r;
    return Ok();
  });
}

ds_status ds_edit_distance(const int* a, size_t a_len, const int* b, size_t b_len,
                           size_t* out) {
  return Guard([&] {
    if (out == nullptr) return Fail(DS_ERR_INVALID_ARGUMENT, "null argument");
    auto x = Actions(a, a_len);
    if (!x.ok()) return FromStatus(x.status());
    auto y = Actions(b, b_len);
    if (!y.ok()) return FromStatus(y.status());
    *out = divskill::trajectory::EditDistance(*x, *y);
    return Ok();
  });
}

ds_status ds_normalized_similarity(const int* a, size_t a_len, const int* b, size_t b_len,
                                   double* out) {
  return Guard([&] {
    if (out == nullptr) return Fail(DS_ERR_INVALID_ARGUMENT, "null argument");
    auto x = Actions(a, a_len);
    if (!x.ok()) return FromStatus(x.status());
    auto y = Actions(b, b_len);
    if (!y.ok()) return FromStatus(y.status());
    *out = divskill::trajectory::NormalizedSimilarity(*x, *y);
    return Ok();
  });
}

ds_status ds_fingerprint(const char* table_json, char** hex) {
  return Guard([&] {
    if (hex == nullptr) return Fail(DS_ERR_INVALID_ARGUMENT, "null argument");
    auto t = TableArg(table_json);
    if (!t.ok()) return FromStatus(t.status());
    *hex = Dup(divskill::exec::Fingerprint(*t));
    return Ok();
  });
}

ds_status ds_results_match(const char* pred_json, const char* gold_json, int* match) {
  return Guard([&] {
    if (match == nullptr) return Fail(DS_ERR_INVALID_ARGUMENT, "null argument");
    auto p = TableArg(pred_json);
    if (!p.ok()) return FromStatus(p.status());
    auto g = TableArg(gold_json);
    if (!g.ok()) return FromStatus(g.status());
    *match = divskill::exec::ResultsMatch(*p, *g) ? 1 : 0;
    return Ok();
  });
}

ds_status ds_execute_sql(const char* db_ref, const char* sql, double timeout_s,
                         size_t max_rows, char** result_json) {
  return Guard([&] {
    if (db_ref == nullptr || sql == nullptr || result_json == nullptr) {
      return Fail(DS_ERR_INVALID_ARGUMENT, "null argument");
    }
    divskill::exec::ExecLimits limits;
    if (timeout_s > 0) limits.timeout_s = timeout_s;
    if (max_rows > 0) limits.max_rows = max_rows;
    const divskill::exec::ExecOutcome out = divskill::exec::ExecuteSql(db_ref, sql, limits);
    json j;
    if (divskill::exec::IsError(out)) {
      const auto& err = std::get<divskill::exec::ExecError>(out);
      j = {{"error",
            {{"kind", std::string(divskill::exec::ExecErrorKindName(err.kind))},
             {"message", err.message}}}};
    } else {
      j = divskill::ResultTableToJson(std::get<divskill::ResultTable>(out));
    }
    *result_json = Dup(j.dump());
    return Ok();
  });
}

ds_status ds_outcome_matrix_create(ds_outcome_matrix** out) {
  return Guard([&] {
    if (out == nullptr) return Fail(DS_ERR_INVALID_ARGUMENT, "null out pointer");
    *out = new ds_outcome_matrix();
    return Ok();
  });
}

void ds_outcome_matrix_free(ds_outcome_matrix* m) { delete m; }

ds_status ds_outcome_matrix_register(ds_outcome_matrix* m, const char* skill_id,
                                     const char* instance_id) {
  return Guard([&] {
    if (m == nullptr) return Fail(DS_ERR_INVALID_ARGUMENT, "null matrix");
    if (skill_id != nullptr) m->matrix.RegisterSkill(skill_id);
    if (instance_id != nullptr) m->matrix.RegisterInstance(instance_id);
    return Ok();
  });
}

ds_status ds_outcome_matrix_append(ds_outcome_matrix* m, const char* skill_id,
                                   const char* instance_id, int success) {
  return Guard([&] {
    if (m == nullptr || skill_id == nullptr || instance_id == nullptr) {
      return Fail(DS_ERR_INVALID_ARGUMENT, "null argument");
    }
    divskill::AttemptOutcome outcome;
    outcome.success = success != 0;
    return FromStatus(m->matrix.Append(skill_id, instance_id, outcome));
  });
}

ds_status ds_outcome_matrix_residual(const ds_outcome_matrix* m,
                                     const char* const* instance_ids, size_t num_instances,
                                     const char* const* skill_ids, size_t num_skills,
                                     char** ids_json) {
  return Guard([&] {
    if (m == nullptr || ids_json == nullptr ||
        (instance_ids == nullptr && num_instances > 0) ||
        (skill_ids == nullptr && num_skills > 0)) {
      return Fail(DS_ERR_INVALID_ARGUMENT, "null argument");
    }
    std::set<std::string> instances;
    for (size_t i = 0; i < num_instances; ++i) instances.insert(instance_ids[i]);
    std::vector<std::string> skills;
    for (size_t i = 0; i < num_skills; ++i) skills.emplace_back(skill_ids[i]);
    int unattempted = 0;
    const divskill::ResidualSet r =
        divskill::ResidualOf(m->matrix, instances, skills, &unattempted);
    *ids_json = Dup(json(std::vector<std::string>(r.instance_ids.begin(),
                                                  r.instance_ids.end()))
                        .dump());
    return Ok();
  });
}

ds_status ds_outcome_matrix_to_jsonl(const ds_outcome_matrix* m, char** jsonl) {
  return Guard([&] {
    if (m == nullptr || jsonl == nullptr) return Fail(DS_ERR_INVALID_ARGUMENT, "null argument");
    *jsonl = Dup(divskill::OutcomesToJsonl(m->matrix));
    return Ok();
  });
}

}  // extern "C"
