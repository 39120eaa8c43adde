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

#ifndef DIVSKILL_CORE_UTIL_H_
#define DIVSKILL_CORE_UTIL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace divskill {

// Lowercase hex SHA-256 of `data`.
std::string Sha256Hex(std::string_view data);

uint64_t SplitMix64(uint64_t x);

// Stable 64-bit seed derived from a base seed and a list of labels. Used to
// give every (batch, position, instance, attempt) its own RNG stream so that
// results do not depend on evaluation order.
uint64_t DeriveSeed(uint64_t base, std::initializer_list<std::string_view> parts);

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Callers write results
// into pre-sized slots, so completion order never leaks into outputs.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn);

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path);
absl::Status WriteFile(const std::filesystem::path& path,
                       std::string_view contents);

}  // namespace divskill

#endif  // DIVSKILL_CORE_UTIL_H_
