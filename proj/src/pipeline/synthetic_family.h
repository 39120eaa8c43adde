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


#ifndef DIVSKILL_PIPELINE_SYNTHETIC_FAMILY_H_
#define DIVSKILL_PIPELINE_SYNTHETIC_FAMILY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "core/types.h"

namespace divskill::pipeline {

struct SyntheticFamilyOptions {
  int capabilities = 3;  // letters a, b, c, ...
  int train = 60;
  int heldout = 40;
  uint64_t seed = 0;
};

// Every instance needs exactly one capability; the train and held-out sets
// each cycle through the letters so they are balanced, and are then shuffled
// with `seed`. Gold answers are literal one-cell tables, databases are
// in-memory. Seed skill i covers letter i only.
struct SyntheticFamily {
  std::vector<Instance> train;
  std::vector<Instance> heldout;
  SkillPool seeds;
};

absl::StatusOr<SyntheticFamily> MakeSyntheticFamily(const SyntheticFamilyOptions& options);

}  // namespace divskill::pipeline

#endif  // DIVSKILL_PIPELINE_SYNTHETIC_FAMILY_H_
