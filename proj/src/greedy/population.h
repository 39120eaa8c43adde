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

// Population-level Pass@K objective over a skill family:
//
//   F(A) = sum_x w(x) * (1 - prod_{s in A} (1 - p_s(x)))
//
// F is monotone submodular, so greedy selection by marginal gain is within
// (1 - 1/e) of the best size-K bank. This file holds the objective, the
// greedy and exhaustive selectors, and the guarantee check.

#ifndef DIVSKILL_GREEDY_POPULATION_H_
#define DIVSKILL_GREEDY_POPULATION_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace divskill::greedy {

inline constexpr double kTolerance = 1e-12;
inline constexpr uint64_t kDefaultEnumerationCap = 1'000'000;

using SkillSubset = std::vector<size_t>;

class PopulationMatrix {
 public:
  // `p` is row-major (skill, instance). Empty `weights` means uniform.
  static absl::StatusOr<PopulationMatrix> Create(size_t num_skills,
                                                 size_t num_instances,
                                                 std::vector<double> p,
                                                 std::vector<double> weights = {});

  size_t num_skills() const { return num_skills_; }
  size_t num_instances() const { return num_instances_; }
  double p(size_t skill, size_t instance) const {
    return p_[skill * num_instances_ + instance];
  }
  double weight(size_t instance) const { return weights_[instance]; }
  // True when every p is exactly 0 or 1.
  bool binary() const { return binary_; }

 private:
  PopulationMatrix(size_t num_skills, size_t num_instances,
                   std::vector<double> p, std::vector<double> weights);

  size_t num_skills_;
  size_t num_instances_;
  std::vector<double> p_;
  std::vector<double> weights_;
  bool binary_;
};

// F(A). Duplicate indices in `subset` are ignored; out-of-range indices fail.
absl::StatusOr<double> Objective(const PopulationMatrix& pm,
                                 std::span<const size_t> subset);

// Delta(s | A) = sum_x w(x) p_s(x) prod_{s' in A} (1 - p_{s'}(x)).
// Fails with AlreadyInSet when s is in A.
absl::StatusOr<double> MarginalGain(const PopulationMatrix& pm, size_t skill,
                                    std::span<const size_t> subset);

// K rounds of argmax marginal gain over the remaining skills; ties go to the
// lowest skill index.
absl::StatusOr<SkillSubset> GreedySelect(const PopulationMatrix& pm, size_t k);

struct BruteForceResult {
  SkillSubset subset;  // ascending
  double value = 0.0;
};

// Exhaustive maximum of F over all subsets of size <= k. Ties between equal
// values go to the lexicographically smallest subset.
absl::StatusOr<BruteForceResult> BruteForceBest(
    const PopulationMatrix& pm, size_t k,
    uint64_t enumeration_cap = kDefaultEnumerationCap);

struct GuaranteeReport {
  SkillSubset greedy_order;
  SkillSubset optimum;
  double greedy_value = 0.0;
  double opt_value = 0.0;
  double ratio = 1.0;  // greedy / opt, 1 when opt == 0
  bool holds = false;  // greedy >= (1 - 1/e) opt - tol
  // F(opt) - F(A_{j+1}) <= (1 - 1/K)(F(opt) - F(A_j)) at every greedy step.
  bool recurrence_holds = false;
};

absl::StatusOr<GuaranteeReport> CheckGuarantee(
    const PopulationMatrix& pm, size_t k,
    uint64_t enumeration_cap = kDefaultEnumerationCap);

// Random matrices for property runs. Entries mix exact zeros/ones with uniform
// probabilities so both the binary and fractional regimes are exercised.
PopulationMatrix RandomPopulation(size_t num_skills, size_t num_instances,
                                  std::mt19937_64& rng);

// Max-coverage gadget on which greedy (under the lowest-index tie rule)
// reaches exactly 1 - (1 - 1/k)^k of the optimum. Skills [0, k) are the greedy
// traps, skills [k, 2k) form the optimal bank.
PopulationMatrix TightCoverageGadget(size_t k);

struct VerifyOptions {
  size_t num_skills = 6;
  size_t num_instances = 20;
  size_t k = 3;
  size_t trials = 50;
  uint64_t seed = 0;
};

// Runs CheckGuarantee on `trials` random matrices and reports ratios and
// violations as JSON.
absl::StatusOr<nlohmann::json> VerifyGreedy(const VerifyOptions& options);

}  // namespace divskill::greedy

#endif  // DIVSKILL_GREEDY_POPULATION_H_
