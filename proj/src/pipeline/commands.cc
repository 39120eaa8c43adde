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


#include "pipeline/commands.h"

#include <map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "agents/agent_loop.h"
#include "agents/http_chat_client.h"
#include "agents/synthetic.h"
#include "agents/tools.h"
#include "core/errors.h"
#include "core/util.h"
#include "exec/manifest.h"
#include "exec/preview.h"
#include "greedy/population.h"
#include "metrics/metrics.h"
#include "optimizer/engine.h"
#include "pipeline/synthetic_family.h"
#include "selection/judges.h"
#include "selection/selection.h"
#include "trajectory/trajectory.h"

namespace divskill::pipeline {
namespace {

using optimizer::DumpJson;

absl::StatusOr<CliConfig> LoadCommon(const CommonArgs& common) {
  DIVSKILL_ASSIGN_OR_RETURN(CliConfig cfg, LoadConfig(common.config, common.overrides));
  if (common.jobs.has_value()) {
    if (*common.jobs <= 0) {
      return MakeError(ErrorKind::kConfigError, "--jobs must be positive");
    }
    cfg.jobs = *common.jobs;
  }
  return cfg;
}

absl::Status RequireSeedForSim(ExecutorKind kind, const CliConfig& cfg) {
  if (kind == ExecutorKind::kSim && !cfg.rng_seed.has_value()) {
    return MakeError(ErrorKind::kConfigError,
                     "run.rng_seed is required for synthetic runs");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<nlohmann::json>> ReadJsonl(const std::filesystem::path& path) {
  DIVSKILL_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  std::vector<nlohmann::json> rows;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
    if (j.is_discarded()) {
      return MakeError(ErrorKind::kParseError,
                       absl::StrCat(path.string(), " line ", line_no, ": invalid JSON"));
    }
    rows.push_back(std::move(j));
  }
  return rows;
}

std::string ToJsonl(const std::vector<nlohmann::json>& rows) {
  std::string out;
  for (const auto& r : rows) absl::StrAppend(&out, r.dump(), "\n");
  return out;
}

absl::StatusOr<agents::ChatClientFactory> MakeChatFactory(const CliConfig& cfg) {
  if (cfg.llm.model.empty()) {
    return MakeError(ErrorKind::kConfigError, "llm.model is not configured");
  }
  DIVSKILL_ASSIGN_OR_RETURN(agents::HttpChatConfig http,
                            agents::HttpChatConfigFromEnv(cfg.llm.base_url));
  http.timeout_s = cfg.llm.timeout_s;
  return agents::ChatClientFactory(
      [http]() { return std::make_unique<agents::HttpChatClient>(http); });
}

agents::RetryPolicy Retry(const CliConfig& cfg) {
  return {cfg.llm.max_attempts, std::chrono::milliseconds(cfg.llm.initial_backoff_ms)};
}

absl::Status WriteRunManifest(const std::filesystem::path& path, const std::string& command,
                              const std::vector<std::filesystem::path>& inputs,
                              nlohmann::json seeds, nlohmann::json config,
                              nlohmann::json outputs) {
  nlohmann::json described = nlohmann::json::array();
  for (const auto& p : inputs) {
    if (p.empty()) continue;
    DIVSKILL_ASSIGN_OR_RETURN(nlohmann::json d, DescribeInput(p));
    described.push_back(std::move(d));
  }
  nlohmann::json manifest = {{"command", command},
                             {"inputs", std::move(described)},
                             {"seeds", std::move(seeds)},
                             {"config", std::move(config)},
                             {"outputs", std::move(outputs)}};
  return WriteFile(path, DumpJson(manifest));
}

std::filesystem::path ManifestPathFor(const std::filesystem::path& out) {
  return std::filesystem::path(out.string() + ".manifest.json");
}

absl::Status Emit(const std::optional<std::filesystem::path>& out, const nlohmann::json& report) {
  if (!out.has_value()) return absl::OkStatus();
  return WriteFile(*out, DumpJson(report));
}

}  // namespace

absl::StatusOr<ExecutorKind> ParseExecutorKind(const std::string& s) {
  if (s == "sim") return ExecutorKind::kSim;
  if (s == "llm") return ExecutorKind::kLlm;
  return MakeError(ErrorKind::kInvalidArgument, absl::StrCat("unknown executor '", s, "'"));
}

absl::StatusOr<OptimizerKind> ParseOptimizerKind(const std::string& s) {
  if (s == "mutate") return OptimizerKind::kMutate;
  if (s == "llm") return OptimizerKind::kLlm;
  return MakeError(ErrorKind::kInvalidArgument, absl::StrCat("unknown optimizer '", s, "'"));
}

absl::StatusOr<JudgeKind> ParseJudgeKind(const std::string& s) {
  if (s == "oracle") return JudgeKind::kOracle;
  if (s == "llm") return JudgeKind::kLlm;
  return MakeError(ErrorKind::kInvalidArgument, absl::StrCat("unknown judge '", s, "'"));
}

absl::StatusOr<nlohmann::json> DescribeInput(const std::filesystem::path& path) {
  DIVSKILL_ASSIGN_OR_RETURN(std::string content, ReadFile(path));
  return nlohmann::json{{"path", path.string()}, {"sha256", Sha256Hex(content)}};
}

absl::StatusOr<SkillPool> LoadPool(const std::filesystem::path& path, size_t max_prompt_len) {
  std::filesystem::path file = path;
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) file = path / "pool_final.json";
  DIVSKILL_ASSIGN_OR_RETURN(std::string text, ReadFile(file));
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    return MakeError(ErrorKind::kParseError, absl::StrCat(file.string(), ": invalid JSON"));
  }
  auto pool = SkillPoolFromJson(j, max_prompt_len);
  if (!pool.ok()) return Annotate(pool.status(), file.string());
  return pool;
}

absl::StatusOr<std::unique_ptr<agents::Executor>> MakeExecutor(ExecutorKind kind,
                                                               const CliConfig& cfg) {
  if (kind == ExecutorKind::kSim) {
    return std::unique_ptr<agents::Executor>(
        std::make_unique<agents::SyntheticExecutor>(cfg.synthetic_noise, cfg.limits));
  }
  DIVSKILL_ASSIGN_OR_RETURN(agents::ChatClientFactory factory, MakeChatFactory(cfg));
  DIVSKILL_ASSIGN_OR_RETURN(
      agents::ToolBox tools,
      agents::ToolBox::Create({cfg.docs_dir, cfg.patterns_dir, cfg.templates_dir, cfg.limits}));
  agents::AgentLoopOptions options;
  options.model = cfg.llm.model;
  options.retry = Retry(cfg);
  options.limits = cfg.limits;
  return std::unique_ptr<agents::Executor>(std::make_unique<agents::LlmAgentExecutor>(
      std::move(factory), std::move(tools), std::move(options)));
}

absl::StatusOr<nlohmann::json> RunOptimizeCommand(const OptimizeArgs& args) {
  DIVSKILL_ASSIGN_OR_RETURN(CliConfig cfg, LoadCommon(args.common));
  DIVSKILL_RETURN_IF_ERROR(RequireSeedForSim(args.executor, cfg));
  const std::optional<std::filesystem::path> pool_path =
      args.seed_pool.has_value() ? args.seed_pool : cfg.seed_pool;
  if (!pool_path.has_value()) {
    return MakeError(ErrorKind::kConfigError, "no seed pool: set paths.seed_pool or --seeds");
  }
  DIVSKILL_ASSIGN_OR_RETURN(SkillPool pool0, LoadPool(*pool_path, cfg.max_prompt_len));
  DIVSKILL_ASSIGN_OR_RETURN(std::vector<Instance> train, exec::LoadManifest(args.train));
  DIVSKILL_ASSIGN_OR_RETURN(std::unique_ptr<agents::Executor> executor,
                            MakeExecutor(args.executor, cfg));
  std::unique_ptr<optimizer::SkillOptimizer> opt;
  if (args.optimizer == OptimizerKind::kMutate) {
    opt = std::make_unique<optimizer::MutationOptimizer>();
  } else {
    DIVSKILL_ASSIGN_OR_RETURN(agents::ChatClientFactory factory, MakeChatFactory(cfg));
    optimizer::LlmOptimizerOptions options;
    options.model = cfg.llm.optimizer_model;
    options.retry = Retry(cfg);
    opt = std::make_unique<optimizer::LlmSkillOptimizer>(std::move(factory), options);
  }
  exec::GoldResolver gold(cfg.limits, cfg.gold_cache_dir);

  optimizer::RunConfig rc;
  rc.K = cfg.K.value_or(static_cast<int>(pool0.size()));
  rc.T = cfg.T;
  rc.b = cfg.b;
  rc.n_eval = cfg.n_eval;
  rc.max_prompt_len = cfg.max_prompt_len;
  rc.rng_seed = cfg.rng_seed.value_or(0);
  rc.rotation_stride = cfg.rotation_stride;

  optimizer::Engine engine;
  engine.executor = executor.get();
  engine.optimizer = opt.get();
  engine.gold = &gold;
  engine.options.budgets = cfg.budgets;
  engine.options.match = cfg.match;
  engine.options.jobs = cfg.jobs;
  if (cfg.dialect_denylist.has_value()) engine.options.dialect_denylist = *cfg.dialect_denylist;

  DIVSKILL_ASSIGN_OR_RETURN(optimizer::RunOutput output,
                            optimizer::Run(pool0, train, rc, engine));
  const nlohmann::json config_json = {
      {"run", optimizer::RunConfigToJson(rc)},
      {"executor", args.executor == ExecutorKind::kSim ? "sim" : "llm"},
      {"optimizer", args.optimizer == OptimizerKind::kMutate ? "mutate" : "llm"},
      {"settings", ConfigToJson(cfg)}};
  DIVSKILL_RETURN_IF_ERROR(
      optimizer::WriteRunDirectory(args.out_dir, config_json, pool0, output));

  int accepted = 0;
  for (const auto& trace : output.traces) {
    for (const auto& p : trace.positions) accepted += p.accepted ? 1 : 0;
  }
  DIVSKILL_RETURN_IF_ERROR(WriteRunManifest(
      args.out_dir / "run_manifest.json", "optimize",
      {args.common.config, args.train, *pool_path}, {{"rng_seed", rc.rng_seed}}, config_json,
      {"config.json", "pool_initial.json", "pool_final.json", "traces/", "outcomes.jsonl"}));
  return nlohmann::json{{"command", "optimize"},
                        {"out_dir", args.out_dir.string()},
                        {"batches", output.traces.size()},
                        {"accepted_updates", accepted},
                        {"pool", SkillPoolToJson(output.pool)}};
}

absl::StatusOr<nlohmann::json> RunInferCommand(const InferArgs& args) {
  DIVSKILL_ASSIGN_OR_RETURN(CliConfig cfg, LoadCommon(args.common));
  DIVSKILL_RETURN_IF_ERROR(RequireSeedForSim(args.executor, cfg));
  DIVSKILL_ASSIGN_OR_RETURN(SkillPool pool, LoadPool(args.pool, cfg.max_prompt_len));
  DIVSKILL_ASSIGN_OR_RETURN(std::vector<Instance> instances, exec::LoadManifest(args.dataset));
  DIVSKILL_ASSIGN_OR_RETURN(std::unique_ptr<agents::Executor> executor,
                            MakeExecutor(args.executor, cfg));
  std::optional<agents::ChatClientFactory> judge_factory;
  if (args.judge == JudgeKind::kLlm) {
    DIVSKILL_ASSIGN_OR_RETURN(judge_factory, MakeChatFactory(cfg));
  }
  exec::GoldResolver gold(cfg.limits, cfg.gold_cache_dir);
  const uint64_t base_seed = cfg.rng_seed.value_or(0);
  const size_t K = pool.size();

  struct Slot {
    absl::Status status;
    agents::RunResult run;
  };
  std::vector<Slot> slots(instances.size() * K);
  ParallelFor(slots.size(), cfg.jobs, [&](size_t n) {
    const Instance& inst = instances[n / K];
    const Skill& skill = pool.at(n % K);
    auto run = executor->Run(skill, inst, cfg.budgets,
                             DeriveSeed(base_seed, {"infer", inst.instance_id, skill.skill_id}));
    if (run.ok()) {
      slots[n].run = *std::move(run);
    } else {
      slots[n].status = run.status();
    }
  });

  std::vector<nlohmann::json> selections, candidates, trajectories;
  selection::TournamentOptions topts;
  topts.max_judge_attempts = cfg.llm.judge_max_attempts;
  topts.jobs = cfg.jobs;
  int correct_selected = 0;
  for (size_t i = 0; i < instances.size(); ++i) {
    const Instance& inst = instances[i];
    DIVSKILL_ASSIGN_OR_RETURN(ResultTable gold_table, gold.Resolve(inst));
    std::vector<selection::Candidate> pool_candidates;
    for (size_t s = 0; s < K; ++s) {
      Slot& slot = slots[i * K + s];
      if (!slot.status.ok()) {
        return MakeError(ErrorKind::kExecutorFailure,
                         absl::StrCat(inst.instance_id, " / ", pool.at(s).skill_id, ": ",
                                      slot.status.message()));
      }
      const agents::RunResult& run = slot.run;
      exec::ExecOutcome outcome =
          run.execution.has_value()
              ? *run.execution
              : exec::ExecOutcome(exec::ExecError{exec::ExecErrorKind::kEngine, run.error});
      const bool correct = !exec::IsError(outcome) &&
                           exec::ResultsMatch(std::get<ResultTable>(outcome), gold_table, cfg.match);
      candidates.push_back({{"instance_id", inst.instance_id},
                            {"skill_id", pool.at(s).skill_id},
                            {"skill_index", s},
                            {"sql", run.sql},
                            {"termination", std::string(agents::TerminationName(run.termination))},
                            {"error", exec::IsError(outcome) ? exec::RenderPreview(outcome) : ""},
                            {"correct", correct}});
      trajectories.push_back(trajectory::TrajectoryToJson(run.trajectory));
      pool_candidates.push_back({s, pool.at(s).skill_id, run.sql, std::move(outcome)});
    }
    std::unique_ptr<selection::JudgeInterface> judge;
    if (args.judge == JudgeKind::kOracle) {
      judge = std::make_unique<selection::OracleJudge>(gold_table, cfg.match);
    } else {
      selection::LlmJudgeOptions jopts;
      jopts.model = cfg.llm.judge_model;
      jopts.retry = Retry(cfg);
      judge = std::make_unique<selection::LlmJudge>(*judge_factory, jopts);
    }
    DIVSKILL_ASSIGN_OR_RETURN(
        selection::Selection sel,
        selection::Select(inst, std::move(pool_candidates), *judge, cfg.match, topts));
    const bool sel_correct = std::any_of(
        candidates.end() - static_cast<std::ptrdiff_t>(K), candidates.end(),
        [&](const nlohmann::json& c) {
          return c["skill_id"] == sel.winner_skill_id && c["correct"].get<bool>();
        });
    correct_selected += sel_correct ? 1 : 0;
    selections.push_back(selection::SelectionToJson(sel));
  }

  const std::filesystem::path dir = args.out.parent_path();
  DIVSKILL_RETURN_IF_ERROR(WriteFile(args.out, ToJsonl(selections)));
  DIVSKILL_RETURN_IF_ERROR(WriteFile(dir / "candidates.jsonl", ToJsonl(candidates)));
  DIVSKILL_RETURN_IF_ERROR(WriteFile(dir / "trajectories.jsonl", ToJsonl(trajectories)));
  const std::filesystem::path pool_file =
      std::filesystem::is_directory(args.pool) ? args.pool / "pool_final.json" : args.pool;
  DIVSKILL_RETURN_IF_ERROR(WriteRunManifest(
      ManifestPathFor(args.out), "infer", {args.common.config, pool_file, args.dataset},
      {{"rng_seed", base_seed}},
      {{"executor", args.executor == ExecutorKind::kSim ? "sim" : "llm"},
       {"judge", args.judge == JudgeKind::kOracle ? "oracle" : "llm"},
       {"settings", ConfigToJson(cfg)}},
      {args.out.string(), (dir / "candidates.jsonl").string(),
       (dir / "trajectories.jsonl").string()}));
  return nlohmann::json{
      {"command", "infer"},
      {"instances", instances.size()},
      {"K", K},
      {"selected_correct", correct_selected},
      {"selections", args.out.string()}};
}

absl::StatusOr<nlohmann::json> RunEvaluateCommand(const EvaluateArgs& args) {
  DIVSKILL_ASSIGN_OR_RETURN(CliConfig cfg, LoadCommon(args.common));
  DIVSKILL_ASSIGN_OR_RETURN(std::vector<Instance> instances, exec::LoadManifest(args.dataset));
  DIVSKILL_ASSIGN_OR_RETURN(std::vector<nlohmann::json> rows, ReadJsonl(args.selections));
  exec::GoldResolver gold(cfg.limits, cfg.gold_cache_dir);

  std::map<std::string, selection::Selection> by_instance;
  for (const auto& row : rows) {
    DIVSKILL_ASSIGN_OR_RETURN(selection::Selection s, selection::SelectionFromJson(row));
    by_instance[s.instance_id] = std::move(s);
  }
  auto verdict = [&](const Instance& inst, const std::string& sql) -> absl::StatusOr<bool> {
    if (sql.empty()) return false;
    DIVSKILL_ASSIGN_OR_RETURN(ResultTable g, gold.Resolve(inst));
    const exec::ExecOutcome out = exec::ExecuteSql(inst.db_ref, sql, cfg.limits);
    return !exec::IsError(out) && exec::ResultsMatch(std::get<ResultTable>(out), g, cfg.match);
  };

  std::vector<std::string> ids;
  std::map<std::string, std::string> selected;
  std::map<std::string, bool> verdicts;
  metrics::MetricsReport report;
  std::map<std::string, metrics::InstanceCandidates> pools;
  // Without --candidates, infer's sibling candidates.jsonl is used if present.
  std::optional<std::filesystem::path> cand_path = args.candidates;
  if (!cand_path.has_value()) {
    const auto sibling = args.selections.parent_path() / "candidates.jsonl";
    if (std::filesystem::exists(sibling)) cand_path = sibling;
  }
  if (cand_path.has_value()) {
    DIVSKILL_ASSIGN_OR_RETURN(std::vector<nlohmann::json> cands, ReadJsonl(*cand_path));
    std::map<std::string, std::map<size_t, std::string>> sqls;
    for (const auto& c : cands) {
      if (!c.contains("instance_id") || !c.contains("skill_index") || !c.contains("sql")) {
        return MakeError(ErrorKind::kParseError,
                         "candidate rows need instance_id, skill_index and sql");
      }
      sqls[c["instance_id"].get<std::string>()][c["skill_index"].get<size_t>()] =
          c["sql"].get<std::string>();
    }
    for (const Instance& inst : instances) {
      auto it = sqls.find(inst.instance_id);
      if (it == sqls.end()) continue;
      metrics::InstanceCandidates ic{inst.instance_id, {}};
      for (const auto& [index, sql] : it->second) {
        DIVSKILL_ASSIGN_OR_RETURN(bool ok, verdict(inst, sql));
        ic.successes.push_back(ok);
      }
      pools[inst.instance_id] = std::move(ic);
    }
    std::vector<metrics::InstanceCandidates> list;
    for (const Instance& inst : instances) {
      if (pools.count(inst.instance_id)) list.push_back(pools[inst.instance_id]);
    }
    if (!list.empty()) {
      DIVSKILL_ASSIGN_OR_RETURN(report.pass_curve, metrics::DatasetPassCurve(list));
      report.pass1_stddev = metrics::PerInstanceMeanStdDev(list);
    }
  }
  for (const Instance& inst : instances) {
    ids.push_back(inst.instance_id);
    auto it = by_instance.find(inst.instance_id);
    if (it == by_instance.end()) continue;
    selected[inst.instance_id] = inst.instance_id;
    DIVSKILL_ASSIGN_OR_RETURN(bool ok, verdict(inst, it->second.sql));
    verdicts[inst.instance_id] = ok;
    nlohmann::json row = {{"instance_id", inst.instance_id},
                          {"selected_correct", ok},
                          {"G", it->second.G}};
    if (pools.count(inst.instance_id)) {
      const auto& s = pools[inst.instance_id].successes;
      row["correct_candidates"] = std::count(s.begin(), s.end(), true);
      row["candidates"] = s.size();
    }
    report.per_instance.push_back(std::move(row));
  }
  DIVSKILL_ASSIGN_OR_RETURN(report.selected_accuracy,
                            metrics::SelectedAccuracy(ids, selected, verdicts));
  nlohmann::json out = metrics::MetricsReportToJson(report);
  DIVSKILL_RETURN_IF_ERROR(Emit(args.out, out));
  if (args.out.has_value()) {
    std::vector<std::filesystem::path> inputs = {args.common.config, args.selections,
                                                 args.dataset};
    if (cand_path) inputs.push_back(*cand_path);
    DIVSKILL_RETURN_IF_ERROR(WriteRunManifest(ManifestPathFor(*args.out), "evaluate", inputs,
                                              nlohmann::json::object(), ConfigToJson(cfg),
                                              {args.out->string()}));
  }
  return out;
}

absl::StatusOr<nlohmann::json> RunVerifyGreedyCommand(const VerifyGreedyArgs& args) {
  if (args.skills <= 0 || args.instances <= 0 || args.k <= 0 || args.trials <= 0) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "--skills, --instances, --k and --trials must be positive");
  }
  greedy::VerifyOptions o;
  o.num_skills = static_cast<size_t>(args.skills);
  o.num_instances = static_cast<size_t>(args.instances);
  o.k = static_cast<size_t>(args.k);
  o.trials = static_cast<size_t>(args.trials);
  o.seed = args.seed;
  DIVSKILL_ASSIGN_OR_RETURN(nlohmann::json report, greedy::VerifyGreedy(o));
  DIVSKILL_RETURN_IF_ERROR(Emit(args.out, report));
  if (args.out.has_value()) {
    DIVSKILL_RETURN_IF_ERROR(WriteRunManifest(
        ManifestPathFor(*args.out), "verify-greedy", {}, {{"seed", args.seed}},
        {{"skills", args.skills}, {"instances", args.instances}, {"k", args.k},
         {"trials", args.trials}},
        {args.out->string()}));
  }
  return report;
}

absl::StatusOr<nlohmann::json> RunAnalyzeCommand(const AnalyzeArgs& args) {
  std::filesystem::path file = args.runs;
  std::error_code ec;
  if (std::filesystem::is_directory(file, ec)) file /= "trajectories.jsonl";
  DIVSKILL_ASSIGN_OR_RETURN(std::vector<nlohmann::json> rows, ReadJsonl(file));
  std::vector<trajectory::Trajectory> trajectories;
  for (const auto& r : rows) {
    DIVSKILL_ASSIGN_OR_RETURN(trajectory::Trajectory t, trajectory::TrajectoryFromJson(r));
    trajectories.push_back(std::move(t));
  }
  DIVSKILL_ASSIGN_OR_RETURN(trajectory::SimilarityReport report,
                            trajectory::SimilarityMatrix(trajectories));
  nlohmann::json out = trajectory::SimilarityReportToJson(report);
  DIVSKILL_RETURN_IF_ERROR(Emit(args.out, out));
  if (args.out.has_value()) {
    DIVSKILL_RETURN_IF_ERROR(WriteRunManifest(ManifestPathFor(*args.out),
                                              "analyze-trajectories", {file},
                                              nlohmann::json::object(),
                                              nlohmann::json::object(), {args.out->string()}));
  }
  return out;
}

absl::StatusOr<nlohmann::json> RunSimulateCommand(const SimulateArgs& args) {
  if (!(args.noise >= 0.0 && args.noise < 1.0)) {
    return MakeError(ErrorKind::kConfigError, "--noise must be in [0, 1)");
  }
  if (args.T < 0 || args.b <= 0) {
    return MakeError(ErrorKind::kConfigError, "--T must be >= 0 and --b positive");
  }
  DIVSKILL_ASSIGN_OR_RETURN(
      SyntheticFamily family,
      MakeSyntheticFamily({args.capabilities, args.train, args.heldout, args.seed}));
  const std::filesystem::path& dir = args.out_dir;
  DIVSKILL_RETURN_IF_ERROR(WriteFile(dir / "train.jsonl", exec::SerializeManifest(family.train)));
  DIVSKILL_RETURN_IF_ERROR(
      WriteFile(dir / "heldout.jsonl", exec::SerializeManifest(family.heldout)));
  DIVSKILL_RETURN_IF_ERROR(WriteFile(dir / "seeds.json", DumpJson(SkillPoolToJson(family.seeds))));
  const std::string toml = absl::StrCat(
      "[run]\nT = ", args.T, "\nb = ", args.b, "\nrng_seed = ", args.seed,
      "\n\n[synthetic]\nnoise = ", args.noise, "\n\n[paths]\nseed_pool = \"seeds.json\"\n");
  DIVSKILL_RETURN_IF_ERROR(WriteFile(dir / "config.toml", toml));
  DIVSKILL_RETURN_IF_ERROR(WriteRunManifest(
      dir / "run_manifest.json", "simulate", {}, {{"seed", args.seed}},
      {{"capabilities", args.capabilities}, {"train", args.train}, {"heldout", args.heldout},
       {"noise", args.noise}, {"T", args.T}, {"b", args.b}},
      {"train.jsonl", "heldout.jsonl", "seeds.json", "config.toml"}));
  return nlohmann::json{{"command", "simulate"},
                        {"out_dir", dir.string()},
                        {"train", family.train.size()},
                        {"heldout", family.heldout.size()},
                        {"skills", family.seeds.size()}};
}

}  // namespace divskill::pipeline
