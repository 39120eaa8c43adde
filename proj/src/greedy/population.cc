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

#include "greedy/population.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "core/errors.h"

namespace divskill::greedy {
namespace {

absl::Status CheckIndices(const PopulationMatrix& pm,
                          std::span<const size_t> subset) {
  for (size_t s : subset) {
    if (s >= pm.num_skills()) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("skill index ", s, " out of range"));
    }
  }
  return absl::OkStatus();
}

// Per-instance failure mass prod_{s in A}(1 - p_s(x)).
std::vector<double> FailureMass(const PopulationMatrix& pm,
                                std::span<const size_t> subset) {
  std::vector<bool> used(pm.num_skills(), false);
  std::vector<double> mass(pm.num_instances(), 1.0);
  for (size_t s : subset) {
    if (used[s]) continue;
    used[s] = true;
    for (size_t x = 0; x < pm.num_instances(); ++x) {
      mass[x] *= 1.0 - pm.p(s, x);
    }
  }
  return mass;
}

double ObjectiveUnchecked(const PopulationMatrix& pm,
                          std::span<const size_t> subset) {
  const std::vector<double> mass = FailureMass(pm, subset);
  double total = 0.0;
  for (size_t x = 0; x < pm.num_instances(); ++x) {
    total += pm.weight(x) * (1.0 - mass[x]);
  }
  return total;
}

uint64_t Binomial(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double c = 1;
  for (uint64_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return static_cast<uint64_t>(std::llround(c));
}

}  // namespace

PopulationMatrix::PopulationMatrix(size_t num_skills, size_t num_instances,
                                   std::vector<double> p,
                                   std::vector<double> weights)
    : num_skills_(num_skills),
      num_instances_(num_instances),
      p_(std::move(p)),
      weights_(std::move(weights)),
      binary_(std::all_of(p_.begin(), p_.end(),
                          [](double v) { return v == 0.0 || v == 1.0; })) {}

absl::StatusOr<PopulationMatrix> PopulationMatrix::Create(
    size_t num_skills, size_t num_instances, std::vector<double> p,
    std::vector<double> weights) {
  if (num_instances == 0) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "population needs at least one instance");
  }
  if (p.size() != num_skills * num_instances) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("expected ", num_skills * num_instances,
                                  " probabilities, got ", p.size()));
  }
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("probability ", v, " outside [0, 1]"));
    }
  }
  if (weights.empty()) {
    weights.assign(num_instances, 1.0 / static_cast<double>(num_instances));
  }
  if (weights.size() != num_instances) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "one weight per instance is required");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      return MakeError(ErrorKind::kInvalidArgument, "negative weight");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kTolerance) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("weights sum to ", sum, ", expected 1"));
  }
  return PopulationMatrix(num_skills, num_instances, std::move(p),
                          std::move(weights));
}

absl::StatusOr<double> Objective(const PopulationMatrix& pm,
                                 std::span<const size_t> subset) {
  DIVSKILL_RETURN_IF_ERROR(CheckIndices(pm, subset));
  return ObjectiveUnchecked(pm, subset);
}

absl::StatusOr<double> MarginalGain(const PopulationMatrix& pm, size_t skill,
                                    std::span<const size_t> subset) {
  DIVSKILL_RETURN_IF_ERROR(CheckIndices(pm, subset));
  if (skill >= pm.num_skills()) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("skill index ", skill, " out of range"));
  }
  if (std::find(subset.begin(), subset.end(), skill) != subset.end()) {
    return MakeError(ErrorKind::kAlreadyInSet,
                     absl::StrCat("skill ", skill, " is already in the bank"));
  }
  const std::vector<double> mass = FailureMass(pm, subset);
  double gain = 0.0;
  for (size_t x = 0; x < pm.num_instances(); ++x) {
    gain += pm.weight(x) * pm.p(skill, x) * mass[x];
  }
  return gain;
}

absl::StatusOr<SkillSubset> GreedySelect(const PopulationMatrix& pm,
                                         size_t k) {
  if (k > pm.num_skills()) {
    return MakeError(ErrorKind::kBadK,
                     absl::StrCat("k=", k, " exceeds ", pm.num_skills(),
                                  " skills"));
  }
  SkillSubset chosen;
  std::vector<bool> used(pm.num_skills(), false);
  std::vector<double> mass(pm.num_instances(), 1.0);
  for (size_t round = 0; round < k; ++round) {
    size_t best = pm.num_skills();
    double best_gain = -1.0;
    for (size_t s = 0; s < pm.num_skills(); ++s) {
      if (used[s]) continue;
      double gain = 0.0;
      for (size_t x = 0; x < pm.num_instances(); ++x) {
        gain += pm.weight(x) * pm.p(s, x) * mass[x];
      }
      // Gains within kTolerance count as ties; the lowest index keeps them.
      if (best == pm.num_skills() || gain > best_gain + kTolerance) {
        best_gain = gain;
        best = s;
      }
    }
    used[best] = true;
    chosen.push_back(best);
    for (size_t x = 0; x < pm.num_instances(); ++x) {
      mass[x] *= 1.0 - pm.p(best, x);
    }
  }
  return chosen;
}

absl::StatusOr<BruteForceResult> BruteForceBest(const PopulationMatrix& pm,
                                                size_t k,
                                                uint64_t enumeration_cap) {
  const size_t n = pm.num_skills();
  if (k > n) {
    return MakeError(ErrorKind::kBadK,
                     absl::StrCat("k=", k, " exceeds ", n, " skills"));
  }
  uint64_t total = 0;
  for (size_t size = 0; size <= k; ++size) total += Binomial(n, size);
  if (total > enumeration_cap) {
    return MakeError(ErrorKind::kTooLarge,
                     absl::StrCat(total, " subsets exceed the enumeration cap ",
                                  enumeration_cap));
  }
  BruteForceResult best;  // empty set, F = 0
  for (size_t size = 1; size <= k; ++size) {
    // Lexicographic enumeration of size-`size` combinations.
    SkillSubset combo(size);
    std::iota(combo.begin(), combo.end(), 0);
    while (true) {
      const double value = ObjectiveUnchecked(pm, combo);
      if (value > best.value ||
          (value == best.value && combo < best.subset && !best.subset.empty())) {
        best.value = value;
        best.subset = combo;
      }
      size_t i = size;
      while (i > 0 && combo[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++combo[i - 1];
      for (size_t j = i; j < size; ++j) combo[j] = combo[j - 1] + 1;
    }
  }
  return best;
}

absl::StatusOr<GuaranteeReport> CheckGuarantee(const PopulationMatrix& pm,
                                               size_t k,
                                               uint64_t enumeration_cap) {
  DIVSKILL_ASSIGN_OR_RETURN(BruteForceResult opt,
                            BruteForceBest(pm, k, enumeration_cap));
  DIVSKILL_ASSIGN_OR_RETURN(SkillSubset order, GreedySelect(pm, k));
  GuaranteeReport report;
  report.greedy_order = order;
  report.optimum = opt.subset;
  report.opt_value = opt.value;
  report.greedy_value = ObjectiveUnchecked(pm, order);
  report.ratio = opt.value > 0.0 ? report.greedy_value / opt.value : 1.0;
  const double bound = 1.0 - std::exp(-1.0);
  report.holds = report.greedy_value >= bound * opt.value - kTolerance;

  report.recurrence_holds = true;
  if (k > 0) {
    const double shrink = 1.0 - 1.0 / static_cast<double>(k);
    double prev_gap = opt.value;  // F(opt) - F(empty)
    for (size_t j = 1; j <= order.size(); ++j) {
      const double value =
          ObjectiveUnchecked(pm, std::span<const size_t>(order.data(), j));
      const double gap = opt.value - value;
      if (gap > shrink * prev_gap + kTolerance) report.recurrence_holds = false;
      prev_gap = gap;
    }
  }
  return report;
}

PopulationMatrix RandomPopulation(size_t num_skills, size_t num_instances,
                                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> p(num_skills * num_instances);
  for (double& v : p) {
    const double r = unit(rng);
    if (r < 0.25) {
      v = 0.0;
    } else if (r < 0.35) {
      v = 1.0;
    } else {
      v = unit(rng);
    }
  }
  return *PopulationMatrix::Create(num_skills, num_instances, std::move(p));
}

PopulationMatrix TightCoverageGadget(size_t k) {
  // Universe: k x k grid elements e(i, c) plus one tail element r(c) per
  // column. Column c carries mass 1/k. Row i holds (1/k)(1-1/k)^i of every
  // column's mass, so the trap skill covering row i always ties the best
  // column skill and wins the tie by index.
  const double kd = static_cast<double>(k);
  const size_t num_instances = k * k + k;
  std::vector<double> weights(num_instances, 0.0);
  std::vector<double> p(2 * k * num_instances, 0.0);
  auto set_p = [&](size_t skill, size_t x) { p[skill * num_instances + x] = 1.0; };
  for (size_t c = 0; c < k; ++c) {
    for (size_t i = 0; i < k; ++i) {
      const size_t x = i * k + c;
      weights[x] = (1.0 / kd) * (1.0 / kd) * std::pow(1.0 - 1.0 / kd, i);
      set_p(i, x);      // trap skill i covers row i
      set_p(k + c, x);  // optimal skill c covers column c
    }
    const size_t tail = k * k + c;
    weights[tail] = (1.0 / kd) * std::pow(1.0 - 1.0 / kd, kd);
    set_p(k + c, tail);
  }
  // Renormalize away rounding so the weights pass the sum-to-one check.
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= sum;
  return *PopulationMatrix::Create(2 * k, num_instances, std::move(p),
                                   std::move(weights));
}

absl::StatusOr<nlohmann::json> VerifyGreedy(const VerifyOptions& options) {
  if (options.num_skills == 0 || options.num_instances == 0) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "need at least one skill and one instance");
  }
  if (options.k > options.num_skills) {
    return MakeError(ErrorKind::kBadK, "k exceeds the number of skills");
  }
  std::mt19937_64 rng(options.seed);
  nlohmann::json ratios = nlohmann::json::array();
  nlohmann::json violations = nlohmann::json::array();
  size_t recurrence_violations = 0;
  double min_ratio = 1.0;
  double sum_ratio = 0.0;
  for (size_t t = 0; t < options.trials; ++t) {
    PopulationMatrix pm =
        RandomPopulation(options.num_skills, options.num_instances, rng);
    DIVSKILL_ASSIGN_OR_RETURN(GuaranteeReport r, CheckGuarantee(pm, options.k));
    ratios.push_back(r.ratio);
    min_ratio = std::min(min_ratio, r.ratio);
    sum_ratio += r.ratio;
    if (!r.recurrence_holds) ++recurrence_violations;
    if (!r.holds) {
      violations.push_back({{"trial", t},
                            {"greedy_value", r.greedy_value},
                            {"opt_value", r.opt_value},
                            {"ratio", r.ratio}});
    }
  }
  return nlohmann::json{
      {"skills", options.num_skills},
      {"instances", options.num_instances},
      {"k", options.k},
      {"trials", options.trials},
      {"seed", options.seed},
      {"bound", 1.0 - std::exp(-1.0)},
      {"min_ratio", min_ratio},
      {"mean_ratio",
       options.trials > 0 ? sum_ratio / static_cast<double>(options.trials)
                          : 1.0},
      {"ratios", std::move(ratios)},
      {"violations", std::move(violations)},
      {"recurrence_violations", recurrence_violations}};
}

}  // namespace divskill::greedy
