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


#include "pipeline/synthetic_family.h"

#include <algorithm>
#include <random>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "core/errors.h"

namespace divskill::pipeline {
namespace {

std::vector<Instance> MakeSplit(const std::string& prefix, int count, int capabilities,
                                std::mt19937_64& rng) {
  std::vector<Instance> out;
  for (int i = 0; i < count; ++i) {
    const char letter = static_cast<char>('a' + i % capabilities);
    Instance inst;
    inst.instance_id = absl::StrFormat("%s-%03d", prefix, i);
    inst.question = absl::StrCat("Report the answer code for ", inst.instance_id,
                                 ". req:", std::string(1, letter));
    inst.db_ref = ":memory:";
    inst.gold.result = ResultTable{{"answer"}, {{Cell(inst.instance_id)}}};
    inst.dialect = Dialect::kSqlite;
    out.push_back(std::move(inst));
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace

absl::StatusOr<SyntheticFamily> MakeSyntheticFamily(const SyntheticFamilyOptions& o) {
  if (o.capabilities < 1 || o.capabilities > 26) {
    return MakeError(ErrorKind::kConfigError, "capabilities must be in [1, 26]");
  }
  if (o.train < 0 || o.heldout < 0) {
    return MakeError(ErrorKind::kConfigError, "split sizes must be non-negative");
  }
  std::mt19937_64 rng(o.seed);
  std::vector<Instance> train = MakeSplit("train", o.train, o.capabilities, rng);
  std::vector<Instance> heldout = MakeSplit("heldout", o.heldout, o.capabilities, rng);
  std::vector<Skill> seeds;
  for (int i = 0; i < o.capabilities; ++i) {
    seeds.push_back({absl::StrCat("skill-", i + 1),
                     absl::StrCat("cap:", std::string(1, static_cast<char>('a' + i))), 0,
                     std::nullopt, SkillOrigin::kSeed});
  }
  DIVSKILL_ASSIGN_OR_RETURN(SkillPool pool, SkillPool::Create(std::move(seeds)));
  return SyntheticFamily{std::move(train), std::move(heldout), std::move(pool)};
}

}  // namespace divskill::pipeline
