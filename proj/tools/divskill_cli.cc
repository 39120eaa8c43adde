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


// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "divskill/divskill.h"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

const char* Subsystem(ds_status status) {
  switch (status) {
    case DS_ERR_CONFIG:
      return "config";
    case DS_ERR_PARSE:
    case DS_ERR_IO:
      return "io";
    case DS_ERR_EXECUTOR:
    case DS_ERR_MALFORMED_TOOL_CALL:
    case DS_ERR_UNKNOWN_TOOL:
      return "executor";
    case DS_ERR_TRANSPORT:
      return "llm-transport";
    case DS_ERR_OPTIMIZER:
    case DS_ERR_SCREEN_VIOLATION:
    case DS_ERR_NO_FAILURES:
      return "optimizer";
    case DS_ERR_JUDGE:
    case DS_ERR_MISSING_SELECTION:
      return "selection";
    case DS_ERR_BAD_K:
    case DS_ERR_TOO_LARGE:
    case DS_ERR_TOO_FEW:
    case DS_ERR_ALREADY_IN_SET:
      return "greedy";
    case DS_ERR_EMPTY_RESIDUAL:
    case DS_ERR_UNKNOWN_ID:
    case DS_ERR_DUPLICATE_ID:
      return "core";
    default:
      return "internal";
  }
}

using CommandFn = ds_status (*)(ds_context*, const char*, char**);

int RunCommand(const std::string& name, CommandFn fn, int jobs, const json& args) {
  ds_context* ctx = nullptr;
  if (ds_context_create(&ctx) != DS_OK) {
    std::cerr << "divskill " << name << ": internal error: " << ds_last_error() << "\n";
    return kExitRuntime;
  }
  if (jobs > 0) ds_context_set_jobs(ctx, jobs);
  char* report = nullptr;
  const ds_status status = fn(ctx, args.dump().c_str(), &report);
  ds_context_free(ctx);
  if (status != DS_OK) {
    std::cerr << "divskill " << name << ": " << Subsystem(status) << " error ["
              << ds_status_name(status) << "]: " << ds_last_error() << "\n";
    return kExitRuntime;
  }
  std::cout << report << "\n";
  ds_string_free(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"divskill: diverse skill pools for text-to-SQL agents"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ds_version());

  int jobs = 0;
  std::string config;
  std::string overrides;
  app.add_option("--jobs", jobs, "Cap on internal parallelism")->check(CLI::NonNegativeNumber);
  app.add_option("--config", config, "TOML configuration file");
  app.add_option("--set", overrides, "JSON merge-patch applied over the configuration");

  json args = json::object();
  auto common = [&] {
    if (!config.empty()) args["config"] = config;
    if (!overrides.empty()) args["set"] = overrides;
  };
  std::string name;
  CommandFn fn = nullptr;

  // optimize
  std::string train, seeds, executor = "sim", optimizer = "mutate", out;
  auto* opt = app.add_subcommand("optimize", "Grow a skill pool on the residual set");
  opt->add_option("--train", train, "Training manifest (JSONL)")->required();
  opt->add_option("--seeds", seeds, "Seed pool JSON (overrides paths.seed_pool)");
  opt->add_option("--executor", executor)->check(CLI::IsMember({"sim", "llm"}));
  opt->add_option("--optimizer", optimizer)->check(CLI::IsMember({"mutate", "llm"}));
  opt->add_option("--out", out, "Run directory")->required();
  opt->callback([&] {
    name = "optimize";
    fn = ds_optimize;
    common();
    args["train"] = train;
    if (!seeds.empty()) args["seeds"] = seeds;
    args["executor"] = executor;
    args["optimizer"] = optimizer;
    args["out"] = out;
  });

  // infer
  std::string pool, dataset, judge = "oracle", infer_out;
  std::string infer_executor = "sim";
  auto* inf = app.add_subcommand("infer", "Run every skill and select one candidate");
  inf->add_option("--pool", pool, "Run directory or pool JSON")->required();
  inf->add_option("--dataset", dataset, "Dataset manifest (JSONL)")->required();
  inf->add_option("--executor", infer_executor)->check(CLI::IsMember({"sim", "llm"}));
  inf->add_option("--judge", judge)->check(CLI::IsMember({"oracle", "llm"}));
  inf->add_option("--out", infer_out, "selections.jsonl path")->required();
  inf->callback([&] {
    name = "infer";
    fn = ds_infer;
    common();
    args["pool"] = pool;
    args["dataset"] = dataset;
    args["executor"] = infer_executor;
    args["judge"] = judge;
    args["out"] = infer_out;
  });

  // evaluate
  std::string selections, eval_dataset, candidates, eval_out;
  auto* ev = app.add_subcommand("evaluate", "Score selections against gold");
  ev->add_option("--selections", selections)->required();
  ev->add_option("--dataset", eval_dataset)->required();
  ev->add_option("--candidates", candidates, "candidates.jsonl (default: sibling file)");
  ev->add_option("--out", eval_out, "Metrics JSON path");
  ev->callback([&] {
    name = "evaluate";
    fn = ds_evaluate;
    common();
    args["selections"] = selections;
    args["dataset"] = eval_dataset;
    if (!candidates.empty()) args["candidates"] = candidates;
    if (!eval_out.empty()) args["out"] = eval_out;
  });

  // verify-greedy
  int skills = 6, instances = 20, k = 3, trials = 50;
  uint64_t seed = 0;
  std::string vg_out;
  auto* vg = app.add_subcommand("verify-greedy", "Check the greedy guarantee on random pools");
  vg->add_option("--skills", skills)->check(CLI::PositiveNumber);
  vg->add_option("--instances", instances)->check(CLI::PositiveNumber);
  vg->add_option("--k", k)->check(CLI::PositiveNumber);
  vg->add_option("--trials", trials)->check(CLI::PositiveNumber);
  vg->add_option("--seed", seed);
  vg->add_option("--out", vg_out);
  vg->callback([&] {
    name = "verify-greedy";
    fn = ds_verify_greedy;
    args = {{"skills", skills}, {"instances", instances}, {"k", k},
            {"trials", trials}, {"seed", seed}};
    if (!vg_out.empty()) args["out"] = vg_out;
  });

  // analyze-trajectories
  std::string runs, an_out;
  auto* an = app.add_subcommand("analyze-trajectories", "Pairwise trajectory similarity");
  an->add_option("--runs", runs, "Directory with trajectories.jsonl, or the file")->required();
  an->add_option("--out", an_out);
  an->callback([&] {
    name = "analyze-trajectories";
    fn = ds_analyze_trajectories;
    args = {{"runs", runs}};
    if (!an_out.empty()) args["out"] = an_out;
  });

  // simulate
  std::string sim_out;
  uint64_t sim_seed = 0;
  int caps = 3, sim_train = 60, heldout = 40, T = 3, b = 20;
  double noise = 0.1;
  auto* sim = app.add_subcommand("simulate", "Write a synthetic capability family");
  sim->add_option("--out", sim_out)->required();
  sim->add_option("--seed", sim_seed)->required();
  sim->add_option("--capabilities", caps)->check(CLI::Range(1, 26));
  sim->add_option("--train", sim_train)->check(CLI::PositiveNumber);
  sim->add_option("--heldout", heldout)->check(CLI::NonNegativeNumber);
  sim->add_option("--noise", noise)->check(CLI::Range(0.0, 0.999999));
  sim->add_option("--T", T)->check(CLI::NonNegativeNumber);
  sim->add_option("--b", b)->check(CLI::PositiveNumber);
  sim->callback([&] {
    name = "simulate";
    fn = ds_simulate;
    args = {{"out", sim_out},   {"seed", sim_seed},       {"capabilities", caps},
            {"train", sim_train}, {"heldout", heldout}, {"noise", noise},
            {"T", T},             {"b", b}};
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }
  if (fn == nullptr) {
    std::cerr << app.help();
    return kExitUsage;
  }
  return RunCommand(name, fn, jobs, args);
}
