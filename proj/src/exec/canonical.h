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

#ifndef DIVSKILL_EXEC_CANONICAL_H_
#define DIVSKILL_EXEC_CANONICAL_H_

#include <string>
#include <vector>

#include "core/result_table.h"

namespace divskill::exec {

enum class ColumnMatch { kPositional };

struct MatchPolicy {
  bool row_order_sensitive = false;
  int float_sig_digits = 6;
  ColumnMatch column_match = ColumnMatch::kPositional;
  std::string null_token = "\\N";

  bool Valid() const { return float_sig_digits >= 1; }
};

// Type-tagged string form of a table: cells are rendered as "N:<null_token>",
// "I:<int>", "D:<rounded>", "T:<text>" or "B:<sha256>". Column names are not
// part of the form; the column count is.
struct CanonicalForm {
  size_t num_columns = 0;
  std::vector<std::vector<std::string>> rows;
  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
};

std::string CanonicalCell(const Cell& cell, const MatchPolicy& policy);

CanonicalForm Canonicalize(const ResultTable& table,
                           const MatchPolicy& policy = {});

// Re-canonicalizes an already canonical form (row order only). Provided so
// idempotence can be checked without going back to tables.
CanonicalForm Canonicalize(const CanonicalForm& form,
                           const MatchPolicy& policy = {});

// SHA-256 over an unambiguous length-prefixed encoding of the canonical form.
std::string Fingerprint(const ResultTable& table,
                        const MatchPolicy& policy = {});
std::string Fingerprint(const CanonicalForm& form);

bool ResultsMatch(const ResultTable& pred, const ResultTable& gold,
                  const MatchPolicy& policy = {});

}  // namespace divskill::exec

#endif  // DIVSKILL_EXEC_CANONICAL_H_
