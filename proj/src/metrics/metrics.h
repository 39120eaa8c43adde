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

// Evaluation statistics: residual success rates, Pass@k from finite candidate
// pools, and selected accuracy.

#ifndef DIVSKILL_METRICS_METRICS_H_
#define DIVSKILL_METRICS_METRICS_H_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "core/outcome_matrix.h"
#include "core/rational.h"
#include "json.hpp"

namespace divskill::metrics {

// Pools up to this size are scored in exact rational arithmetic.
inline constexpr size_t kExactPassAtKLimit = 16;

// (1/|R|) * sum over x in R of successes(s,x)/attempts(s,x). Instances with no
// attempts contribute zero.
absl::StatusOr<Rational> EmpiricalSuccessRate(const OutcomeMatrix& matrix,
                                              const std::string& skill_id,
                                              const ResidualSet& residual);

// 1 - C(f, k) / C(n, k) for a pool of n candidates with f failures.
absl::StatusOr<Rational> PassAtKExact(size_t n, size_t failures, size_t k);

// Per-instance Pass@k for the given candidate verdicts. Exact for pools of at
// most kExactPassAtKLimit candidates, product form in doubles above.
absl::StatusOr<double> PassAtK(const std::vector<bool>& successes, size_t k);

// Pass@k for k = 1..K averaged over instances.
struct PassKCurve {
  std::map<size_t, double> values;
  bool NonDecreasing() const;
};

struct InstanceCandidates {
  std::string instance_id;
  std::vector<bool> successes;  // one verdict per candidate, pool order
};

struct PassCurveOptions {
  // Score pass@1 on the first candidate only instead of the mean over
  // candidates.
  bool first_candidate_pass1 = false;
};

// Every instance must contribute the same number of candidates K >= 1.
absl::StatusOr<PassKCurve> DatasetPassCurve(
    const std::vector<InstanceCandidates>& instances,
    const PassCurveOptions& options = {});

// Standard deviation (population) of the per-instance mean candidate success.
double PerInstanceMeanStdDev(const std::vector<InstanceCandidates>& instances);

// Fraction of instances whose selected candidate is execution-correct.
// `selections` maps instance_id -> candidate_ref and `verdicts` maps
// candidate_ref -> correctness. Fails with MissingSelection when an instance
// in `instance_ids` has no selection or its candidate has no verdict, and when
// `instance_ids` is empty.
absl::StatusOr<double> SelectedAccuracy(
    const std::vector<std::string>& instance_ids,
    const std::map<std::string, std::string>& selections,
    const std::map<std::string, bool>& verdicts);

struct MetricsReport {
  PassKCurve pass_curve;
  double selected_accuracy = 0.0;
  double pass1_stddev = 0.0;
  nlohmann::json per_instance = nlohmann::json::array();
};

// {"pass_curve": {"1": .., ...}, "selected_accuracy": .., "pass1_stddev": ..,
//  "per_instance": [...]}
nlohmann::json MetricsReportToJson(const MetricsReport& report);

}  // namespace divskill::metrics

#endif  // DIVSKILL_METRICS_METRICS_H_
