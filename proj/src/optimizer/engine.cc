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


#include "optimizer/engine.h"

#include <algorithm>
#include <map>
#include <random>

#include "absl/strings/str_cat.h"
#include "core/errors.h"
#include "core/util.h"

namespace divskill::optimizer {
namespace {

struct Evaluation {
  std::map<std::string, std::vector<AttemptOutcome>> attempts;  // by instance
  int successes = 0;
  int total = 0;
  std::vector<agents::FailureTrace> failures;

  Rational rate() const { return Rational(successes, std::max(total, 1)); }
};

std::string ErrorSummary(const agents::RunResult& run) {
  if (!run.error.empty()) return run.error;
  if (!run.execution.has_value()) return "no SQL was executed";
  if (exec::IsError(*run.execution)) {
    const auto& err = std::get<exec::ExecError>(*run.execution);
    return absl::StrCat(std::string(exec::ExecErrorKindName(err.kind)), ": ", err.message);
  }
  return absl::StrCat("result (",
                      std::get<ResultTable>(*run.execution).rows.size(),
                      " rows) does not match the expected answer");
}

absl::StatusOr<Evaluation> Evaluate(const std::string& skill_id,
                                    const std::string& prompt,
                                    const std::set<std::string>& residual,
                                    const std::map<std::string, Instance>& instances,
                                    int t, int position, const RunConfig& config,
                                    Engine& engine) {
  const std::vector<std::string> ids(residual.begin(), residual.end());
  const size_t n_eval = static_cast<size_t>(config.n_eval);
  struct Slot {
    absl::Status status;
    bool success = false;
    std::string sql;
    agents::RunResult run;
  };
  std::vector<Slot> slots(ids.size() * n_eval);
  const Skill skill{skill_id, prompt, 0, std::nullopt, SkillOrigin::kSeed};

  ParallelFor(slots.size(), engine.options.jobs, [&](size_t k) {
    const Instance& inst = instances.at(ids[k / n_eval]);
    const size_t attempt = k % n_eval;
    const uint64_t seed = DeriveSeed(
        config.rng_seed, {"eval", absl::StrCat(t), skill_id, inst.instance_id,
                          absl::StrCat(attempt)});
    Slot& slot = slots[k];
    auto run = engine.executor->Run(skill, inst, engine.options.budgets, seed);
    if (!run.ok()) {
      slot.status = run.status();
      return;
    }
    slot.run = *std::move(run);
    if (slot.run.execution.has_value() && !exec::IsError(*slot.run.execution)) {
      auto gold = engine.gold->Resolve(inst);
      if (!gold.ok()) {
        slot.status = gold.status();
        return;
      }
      slot.success = exec::ResultsMatch(std::get<ResultTable>(*slot.run.execution),
                                        *gold, engine.options.match);
    }
  });

  Evaluation out;
  for (size_t k = 0; k < slots.size(); ++k) {
    Slot& slot = slots[k];
    const Instance& inst = instances.at(ids[k / n_eval]);
    if (!slot.status.ok()) {
      return MakeError(ErrorKind::kExecutorFailure,
                       absl::StrCat("batch ", t, " position ", position, " skill ",
                                    skill_id, " instance ", inst.instance_id, ": ",
                                    slot.status.message()));
    }
    AttemptOutcome outcome{slot.success, std::nullopt, t, position};
    if (!slot.run.sql.empty()) outcome.candidate_ref = Sha256Hex(slot.run.sql).substr(0, 16);
    out.attempts[inst.instance_id].push_back(outcome);
    ++out.total;
    if (slot.success) {
      ++out.successes;
    } else {
      out.failures.push_back(
          {inst, std::move(slot.run.trajectory), ErrorSummary(slot.run)});
    }
  }
  return out;
}

nlohmann::json IdsToJson(const std::set<std::string>& ids) {
  return nlohmann::json(std::vector<std::string>(ids.begin(), ids.end()));
}

}  // namespace

absl::Status RunConfig::Validate(size_t pool_size, size_t train_size) const {
  auto fail = [](const std::string& what) {
    return MakeError(ErrorKind::kConfigError, what);
  };
  if (K <= 0 || static_cast<size_t>(K) != pool_size) {
    return fail(absl::StrCat("K=", K, " but the pool has ", pool_size, " skills"));
  }
  if (T < 0) return fail("T must be non-negative");
  if (b <= 0) return fail("b must be positive");
  if (n_eval <= 0) return fail("n_eval must be positive");
  if (max_prompt_len == 0) return fail("max_prompt_len must be positive");
  if (rotation_stride.has_value() && *rotation_stride <= 0) {
    return fail("rotation_stride must be positive");
  }
  if (T > 0 && static_cast<size_t>(b) > train_size) {
    return fail(absl::StrCat("b=", b, " exceeds the ", train_size, " training instances"));
  }
  return absl::OkStatus();
}

nlohmann::json RunConfigToJson(const RunConfig& c) {
  return {{"K", c.K},
          {"T", c.T},
          {"b", c.b},
          {"n_eval", c.n_eval},
          {"max_prompt_len", c.max_prompt_len},
          {"rng_seed", c.rng_seed},
          {"rotation_stride",
           c.rotation_stride ? nlohmann::json(*c.rotation_stride) : nlohmann::json()}};
}

int RotationStride(int K, int T, std::optional<int> stride_override) {
  if (stride_override.has_value()) return *stride_override;
  if (T <= 0) return 1;
  return std::max(1, (K + T - 1) / T);
}

std::vector<size_t> RotationOrdering(int K, int t, int T,
                                     std::optional<int> stride_override) {
  std::vector<size_t> order;
  if (K <= 0) return order;
  const int64_t stride = RotationStride(K, T, stride_override);
  const size_t offset = static_cast<size_t>((static_cast<int64_t>(t - 1) * stride) % K);
  for (int i = 0; i < K; ++i) {
    order.push_back((offset + static_cast<size_t>(i)) % static_cast<size_t>(K));
  }
  return order;
}

std::string_view AcceptReasonName(AcceptReason reason) {
  switch (reason) {
    case AcceptReason::kStrictImprovement:
      return "strict_improvement";
    case AcceptReason::kBrevityTiebreak:
      return "brevity_tiebreak";
    case AcceptReason::kNotBetter:
      return "not_better";
    case AcceptReason::kScreenViolation:
      return "screen_violation";
    case AcceptReason::kTooLong:
      return "too_long";
    case AcceptReason::kNoFailures:
      return "no_failures";
    case AcceptReason::kSkipped:
      return "skipped";
  }
  return "not_better";
}

AcceptDecision AcceptUpdate(const std::string& old_prompt,
                            const std::string& new_prompt,
                            const Rational& old_rate, const Rational& new_rate) {
  if (new_rate > old_rate) return {true, AcceptReason::kStrictImprovement};
  if (new_rate == old_rate && new_prompt.size() < old_prompt.size()) {
    return {true, AcceptReason::kBrevityTiebreak};
  }
  return {false, AcceptReason::kNotBetter};
}

nlohmann::json BatchTraceToJson(const BatchTrace& trace) {
  nlohmann::json positions = nlohmann::json::array();
  auto opt = [](const auto& v, auto f) {
    return v.has_value() ? nlohmann::json(f(*v)) : nlohmann::json();
  };
  auto rate = [](const Rational& r) { return r.ToString(); };
  auto same = [](const std::string& s) { return s; };
  for (const PositionTrace& p : trace.positions) {
    positions.push_back({{"position", p.position},
                         {"skill_id", p.skill_id},
                         {"residual_before", IdsToJson(p.residual_before)},
                         {"prompt_before", p.prompt_before},
                         {"proposed_prompt", opt(p.proposed_prompt, same)},
                         {"accepted", p.accepted},
                         {"reason", std::string(AcceptReasonName(p.reason))},
                         {"old_rate", opt(p.old_rate, rate)},
                         {"new_rate", opt(p.new_rate, rate)},
                         {"residual_after", IdsToJson(p.residual_after)},
                         {"screen_violation", opt(p.screen_violation, same)}});
  }
  return {{"batch", trace.batch},
          {"ordering", trace.ordering},
          {"instances", trace.instances},
          {"positions", std::move(positions)}};
}

absl::StatusOr<BatchResult> RunBatch(const SkillPool& pool,
                                     const std::vector<Instance>& batch, int t,
                                     const RunConfig& config, Engine& engine) {
  if (engine.executor == nullptr || engine.optimizer == nullptr || engine.gold == nullptr) {
    return MakeError(ErrorKind::kConfigError, "engine is missing a component");
  }
  std::map<std::string, Instance> instances;
  BatchResult out{pool, {}, {}};
  out.trace.batch = t;
  for (const Instance& inst : batch) {
    instances.emplace(inst.instance_id, inst);
    out.trace.instances.push_back(inst.instance_id);
    out.outcomes.RegisterInstance(inst.instance_id);
  }
  for (const Skill& s : pool.skills()) out.outcomes.RegisterSkill(s.skill_id);

  const LexicalScreen screen =
      LexicalScreen::ForBatch(batch, engine.options.dialect_denylist);
  const std::vector<size_t> ordering =
      RotationOrdering(static_cast<int>(pool.size()), t, config.T, config.rotation_stride);
  std::set<std::string> residual;
  for (const auto& [id, inst] : instances) residual.insert(id);
  std::vector<std::string> considered;
  std::vector<std::optional<std::string>> accepted(pool.size());

  for (size_t j = 0; j < ordering.size(); ++j) {
    const Skill& skill = pool.at(ordering[j]);
    const int position = static_cast<int>(j) + 1;
    out.trace.ordering.push_back(skill.skill_id);
    PositionTrace pos;
    pos.position = position;
    pos.skill_id = skill.skill_id;
    pos.residual_before = residual;
    pos.prompt_before = skill.prompt;
    if (residual.empty()) {
      pos.reason = AcceptReason::kSkipped;
      out.trace.positions.push_back(std::move(pos));
      considered.push_back(skill.skill_id);
      continue;
    }

    DIVSKILL_ASSIGN_OR_RETURN(
        Evaluation current,
        Evaluate(skill.skill_id, skill.prompt, residual, instances, t, position, config, engine));
    pos.old_rate = current.rate();
    const Evaluation* kept = &current;
    Evaluation proposal_eval;

    if (current.failures.empty()) {
      pos.reason = AcceptReason::kNoFailures;
    } else {
      auto proposal = engine.optimizer->Optimize(skill.prompt, current.failures);
      if (!proposal.ok()) {
        return MakeError(ErrorKind::kOptimizerFailure,
                         absl::StrCat("batch ", t, " position ", position, " skill ",
                                      skill.skill_id, ": ", proposal.status().message()));
      }
      pos.proposed_prompt = *proposal;
      if (proposal->empty() || proposal->size() > config.max_prompt_len) {
        pos.reason = AcceptReason::kTooLong;
      } else if (auto bad = screen.Violation(*proposal); bad.has_value()) {
        pos.reason = AcceptReason::kScreenViolation;
        pos.screen_violation = *bad;
      } else {
        if (*proposal == skill.prompt) {
          proposal_eval = current;
        } else {
          DIVSKILL_ASSIGN_OR_RETURN(
              proposal_eval, Evaluate(skill.skill_id, *proposal, residual, instances, t,
                                      position, config, engine));
        }
        pos.new_rate = proposal_eval.rate();
        const AcceptDecision d =
            AcceptUpdate(skill.prompt, *proposal, *pos.old_rate, *pos.new_rate);
        pos.accepted = d.accept;
        pos.reason = d.reason;
        if (d.accept) {
          kept = &proposal_eval;
          accepted[ordering[j]] = *proposal;
        }
      }
    }

    for (const auto& [id, attempts] : kept->attempts) {
      for (const AttemptOutcome& a : attempts) {
        DIVSKILL_RETURN_IF_ERROR(out.outcomes.Append(skill.skill_id, id, a));
      }
    }
    considered.push_back(skill.skill_id);
    residual = ResidualOf(out.outcomes, residual, considered).instance_ids;
    pos.residual_after = residual;
    out.trace.positions.push_back(std::move(pos));
  }

  for (size_t i = 0; i < accepted.size(); ++i) {
    if (accepted[i].has_value()) out.pool.CommitUpdate(i, *accepted[i]);
  }
  return out;
}

std::vector<std::vector<size_t>> SampleBatches(size_t train_size, int T, int b,
                                               uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<size_t>> batches;
  for (int t = 0; t < T; ++t) {
    std::vector<size_t> idx(train_size);
    for (size_t i = 0; i < train_size; ++i) idx[i] = i;
    const size_t take = std::min(train_size, static_cast<size_t>(b));
    for (size_t i = 0; i < take; ++i) {
      std::uniform_int_distribution<size_t> pick(i, train_size - 1);
      std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(take);
    batches.push_back(std::move(idx));
  }
  return batches;
}

absl::StatusOr<RunOutput> Run(const SkillPool& pool0,
                              const std::vector<Instance>& train,
                              const RunConfig& config, Engine& engine) {
  DIVSKILL_RETURN_IF_ERROR(config.Validate(pool0.size(), train.size()));
  RunOutput out{pool0, {}, {}};
  for (const Skill& s : pool0.skills()) out.outcomes.RegisterSkill(s.skill_id);
  const auto batches = SampleBatches(train.size(), config.T, config.b, config.rng_seed);
  for (int t = 1; t <= config.T; ++t) {
    std::vector<Instance> batch;
    for (size_t i : batches[static_cast<size_t>(t - 1)]) batch.push_back(train[i]);
    DIVSKILL_ASSIGN_OR_RETURN(BatchResult r, RunBatch(out.pool, batch, t, config, engine));
    out.pool = std::move(r.pool);
    out.traces.push_back(std::move(r.trace));
    out.outcomes.Merge(r.outcomes);
  }
  return out;
}

std::string DumpJson(const nlohmann::json& j) { return j.dump(2) + "\n"; }

absl::Status WriteRunDirectory(const std::filesystem::path& dir,
                               const nlohmann::json& config,
                               const SkillPool& pool0, const RunOutput& output) {
  DIVSKILL_RETURN_IF_ERROR(WriteFile(dir / "config.json", DumpJson(config)));
  DIVSKILL_RETURN_IF_ERROR(
      WriteFile(dir / "pool_initial.json", DumpJson(SkillPoolToJson(pool0))));
  DIVSKILL_RETURN_IF_ERROR(
      WriteFile(dir / "pool_final.json", DumpJson(SkillPoolToJson(output.pool))));
  for (const BatchTrace& trace : output.traces) {
    DIVSKILL_RETURN_IF_ERROR(
        WriteFile(dir / "traces" / absl::StrCat("batch_", trace.batch, ".json"),
                  DumpJson(BatchTraceToJson(trace))));
  }
  return WriteFile(dir / "outcomes.jsonl", OutcomesToJsonl(output.outcomes));
}

}  // namespace divskill::optimizer
