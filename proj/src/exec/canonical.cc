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

#include "exec/canonical.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "absl/strings/str_cat.h"
#include "core/util.h"

namespace divskill::exec {
namespace {

std::string RoundDecimal(double v, int sig_digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // folds -0 into +0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*e", sig_digits - 1, v);
  return buf;
}

std::string TrimTrailingWhitespace(const std::string& s) {
  const size_t end = s.find_last_not_of(" \t\r\n\f\v");
  return end == std::string::npos ? std::string() : s.substr(0, end + 1);
}

}  // namespace

std::string CanonicalCell(const Cell& cell, const MatchPolicy& policy) {
  return std::visit(
      [&policy](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return absl::StrCat("N:", policy.null_token);
        } else if constexpr (std::is_same_v<T, int64_t>) {
          return absl::StrCat("I:", v);
        } else if constexpr (std::is_same_v<T, double>) {
          return absl::StrCat("D:", RoundDecimal(v, policy.float_sig_digits));
        } else if constexpr (std::is_same_v<T, std::string>) {
          return absl::StrCat("T:", TrimTrailingWhitespace(v));
        } else {
          return absl::StrCat("B:", v.sha256_hex);
        }
      },
      cell);
}

CanonicalForm Canonicalize(const ResultTable& table,
                           const MatchPolicy& policy) {
  CanonicalForm form;
  form.num_columns = table.columns.size();
  form.rows.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    std::vector<std::string> out;
    out.reserve(row.size());
    for (const Cell& cell : row) out.push_back(CanonicalCell(cell, policy));
    form.rows.push_back(std::move(out));
  }
  if (!policy.row_order_sensitive) {
    std::sort(form.rows.begin(), form.rows.end());
  }
  return form;
}

CanonicalForm Canonicalize(const CanonicalForm& form,
                           const MatchPolicy& policy) {
  CanonicalForm out = form;
  if (!policy.row_order_sensitive) std::sort(out.rows.begin(), out.rows.end());
  return out;
}

std::string Fingerprint(const CanonicalForm& form) {
  std::string buf = absl::StrCat("cols=", form.num_columns, ";");
  for (const auto& row : form.rows) {
    absl::StrAppend(&buf, "[");
    for (const std::string& cell : row) {
      absl::StrAppend(&buf, cell.size(), ":", cell);
    }
    absl::StrAppend(&buf, "]");
  }
  return Sha256Hex(buf);
}

std::string Fingerprint(const ResultTable& table, const MatchPolicy& policy) {
  return Fingerprint(Canonicalize(table, policy));
}

bool ResultsMatch(const ResultTable& pred, const ResultTable& gold,
                  const MatchPolicy& policy) {
  if (pred.columns.size() != gold.columns.size()) return false;
  return Canonicalize(pred, policy) == Canonicalize(gold, policy);
}

}  // namespace divskill::exec
