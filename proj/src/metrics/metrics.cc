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

#include "metrics/metrics.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "core/errors.h"

namespace divskill::metrics {
namespace {

// C(n, k) as an exact integer; callers keep n small enough for int64.
int64_t Binomial(size_t n, size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  __int128 c = 1;
  for (size_t i = 1; i <= k; ++i) {
    c = c * static_cast<__int128>(n - k + i) / static_cast<__int128>(i);
  }
  return static_cast<int64_t>(c);
}

}  // namespace

absl::StatusOr<Rational> EmpiricalSuccessRate(const OutcomeMatrix& matrix,
                                              const std::string& skill_id,
                                              const ResidualSet& residual) {
  if (residual.empty()) {
    return MakeError(ErrorKind::kEmptyResidual,
                     "success rate on an empty residual is undefined");
  }
  Rational sum(0);
  for (const std::string& x : residual.instance_ids) {
    const SuccessCount c = matrix.Count(skill_id, x);
    if (c.attempts > 0) sum += Rational(c.successes, c.attempts);
  }
  return sum / Rational(static_cast<int64_t>(residual.size()));
}

absl::StatusOr<Rational> PassAtKExact(size_t n, size_t failures, size_t k) {
  if (k < 1 || k > n) {
    return MakeError(ErrorKind::kBadK,
                     absl::StrCat("k=", k, " outside [1, ", n, "]"));
  }
  if (failures > n) {
    return MakeError(ErrorKind::kInvalidArgument, "more failures than candidates");
  }
  if (n > 62) {
    return MakeError(ErrorKind::kTooLarge,
                     "exact Pass@k limited to pools of at most 62 candidates");
  }
  return Rational(1) - Rational(Binomial(failures, k), Binomial(n, k));
}

absl::StatusOr<double> PassAtK(const std::vector<bool>& successes, size_t k) {
  const size_t n = successes.size();
  if (k < 1 || k > n) {
    return MakeError(ErrorKind::kBadK,
                     absl::StrCat("k=", k, " outside [1, ", n, "]"));
  }
  const size_t f =
      static_cast<size_t>(std::count(successes.begin(), successes.end(), false));
  if (n <= kExactPassAtKLimit) {
    DIVSKILL_ASSIGN_OR_RETURN(Rational r, PassAtKExact(n, f, k));
    return r.ToDouble();
  }
  if (f < k) return 1.0;
  // C(f,k)/C(n,k) = prod_{i<k} (f-i)/(n-i)
  double ratio = 1.0;
  for (size_t i = 0; i < k; ++i) {
    ratio *= static_cast<double>(f - i) / static_cast<double>(n - i);
  }
  return 1.0 - ratio;
}

bool PassKCurve::NonDecreasing() const {
  double prev = -1.0;
  for (const auto& [k, v] : values) {
    if (v < prev) return false;
    prev = v;
  }
  return true;
}

absl::StatusOr<PassKCurve> DatasetPassCurve(
    const std::vector<InstanceCandidates>& instances,
    const PassCurveOptions& options) {
  if (instances.empty()) {
    return MakeError(ErrorKind::kInvalidArgument, "no instances to score");
  }
  const size_t pool = instances.front().successes.size();
  if (pool == 0) {
    return MakeError(ErrorKind::kBadK, "instances have no candidates");
  }
  for (const auto& inst : instances) {
    if (inst.successes.size() != pool) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("instance ", inst.instance_id, " has ",
                                    inst.successes.size(),
                                    " candidates, expected ", pool));
    }
  }
  PassKCurve curve;
  for (size_t k = 1; k <= pool; ++k) {
    double total = 0.0;
    for (const auto& inst : instances) {
      if (k == 1 && options.first_candidate_pass1) {
        total += inst.successes.front() ? 1.0 : 0.0;
        continue;
      }
      DIVSKILL_ASSIGN_OR_RETURN(double v, PassAtK(inst.successes, k));
      total += v;
    }
    curve.values[k] = total / static_cast<double>(instances.size());
  }
  return curve;
}

double PerInstanceMeanStdDev(const std::vector<InstanceCandidates>& instances) {
  if (instances.empty()) return 0.0;
  std::vector<double> means;
  for (const auto& inst : instances) {
    if (inst.successes.empty()) continue;
    const double hits = static_cast<double>(
        std::count(inst.successes.begin(), inst.successes.end(), true));
    means.push_back(hits / static_cast<double>(inst.successes.size()));
  }
  if (means.empty()) return 0.0;
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= static_cast<double>(means.size());
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  return std::sqrt(var / static_cast<double>(means.size()));
}

absl::StatusOr<double> SelectedAccuracy(
    const std::vector<std::string>& instance_ids,
    const std::map<std::string, std::string>& selections,
    const std::map<std::string, bool>& verdicts) {
  if (instance_ids.empty()) {
    return MakeError(ErrorKind::kMissingSelection,
                     "selected accuracy over zero instances");
  }
  size_t correct = 0;
  for (const std::string& id : instance_ids) {
    auto sel = selections.find(id);
    if (sel == selections.end()) {
      return MakeError(ErrorKind::kMissingSelection,
                       absl::StrCat("no selection for instance ", id));
    }
    auto verdict = verdicts.find(sel->second);
    if (verdict == verdicts.end()) {
      return MakeError(ErrorKind::kMissingSelection,
                       absl::StrCat("no verdict for candidate ", sel->second));
    }
    if (verdict->second) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(instance_ids.size());
}

nlohmann::json MetricsReportToJson(const MetricsReport& report) {
  nlohmann::json curve = nlohmann::json::object();
  for (const auto& [k, v] : report.pass_curve.values) {
    curve[absl::StrCat(k)] = v;
  }
  return {{"pass_curve", std::move(curve)},
          {"selected_accuracy", report.selected_accuracy},
          {"pass1_stddev", report.pass1_stddev},
          {"per_instance", report.per_instance}};
}

}  // namespace divskill::metrics
