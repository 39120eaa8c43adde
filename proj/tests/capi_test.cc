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


// Exercises the shared library through its C header only.

#include <cmath>
#include <cstring>
#include <string>

#include "divskill/divskill.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace {

using nlohmann::json;

std::string Take(char* s) {
  std::string out = s ? s : "";
  ds_string_free(s);
  return out;
}

TEST(CApiTest, VersionAndStatusNames) {
  EXPECT_STREQ(ds_version(), "0.1.0");
  EXPECT_STREQ(ds_status_name(DS_ERR_BAD_K), "BadK");
  EXPECT_STREQ(ds_status_name(DS_ERR_INTERNAL), "Internal");
}

TEST(CApiTest, PassAtK) {
  int64_t num = 0, den = 0;
  ASSERT_EQ(ds_pass_at_k_exact(8, 6, 2, &num, &den), DS_OK);
  EXPECT_EQ(num, 13);
  EXPECT_EQ(den, 28);
  EXPECT_EQ(ds_pass_at_k_exact(4, 1, 9, &num, &den), DS_ERR_BAD_K);
  EXPECT_NE(std::string(ds_last_error()).find("k"), std::string::npos);
  const int s[] = {0, 1, 0};
  double v = 0;
  ASSERT_EQ(ds_pass_at_k(s, 3, 3, &v), DS_OK);
  EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(CApiTest, Population) {
  const double p[] = {1, 0, 0, 1};
  ds_population* pop = nullptr;
  ASSERT_EQ(ds_population_create(2, 2, p, nullptr, &pop), DS_OK);
  size_t order[2];
  double value = 0;
  ASSERT_EQ(ds_population_greedy(pop, 2, order, &value), DS_OK);
  EXPECT_EQ(order[0], 0u);
  EXPECT_EQ(order[1], 1u);
  EXPECT_DOUBLE_EQ(value, 1.0);
  const size_t a[] = {0};
  ASSERT_EQ(ds_population_marginal_gain(pop, 1, a, 1, &value), DS_OK);
  EXPECT_DOUBLE_EQ(value, 0.5);
  EXPECT_EQ(ds_population_marginal_gain(pop, 0, a, 1, &value), DS_ERR_ALREADY_IN_SET);
  char* report = nullptr;
  ASSERT_EQ(ds_population_check_guarantee(pop, 2, &report), DS_OK);
  EXPECT_TRUE(json::parse(Take(report))["holds"].get<bool>());
  size_t subset[2], len = 0;
  ASSERT_EQ(ds_population_brute_force(pop, 2, subset, &len, &value), DS_OK);
  EXPECT_EQ(len, 2u);
  ds_population_free(pop);
  EXPECT_EQ(ds_population_create(2, 2, nullptr, nullptr, &pop), DS_ERR_INVALID_ARGUMENT);
}

TEST(CApiTest, TrajectoryMetric) {
  const int a[] = {0, 2, 3}, b[] = {0, 2, 4};
  double s = 0;
  ASSERT_EQ(ds_normalized_similarity(a, 3, b, 3, &s), DS_OK);
  EXPECT_NEAR(s, 0.6667, 1e-4);
  size_t d = 0;
  ASSERT_EQ(ds_edit_distance(a, 3, b, 0, &d), DS_OK);
  EXPECT_EQ(d, 3u);
  const int bad[] = {42};
  EXPECT_EQ(ds_edit_distance(bad, 1, b, 1, &d), DS_ERR_INVALID_ARGUMENT);
}

TEST(CApiTest, FingerprintAndMatch) {
  const char* x = R"({"columns":["a"],"rows":[[1],[2]]})";
  const char* y = R"({"columns":["a"],"rows":[[2],[1]]})";
  int match = 0;
  ASSERT_EQ(ds_results_match(x, y, &match), DS_OK);
  EXPECT_EQ(match, 1);
  char *fx = nullptr, *fy = nullptr;
  ASSERT_EQ(ds_fingerprint(x, &fx), DS_OK);
  ASSERT_EQ(ds_fingerprint(y, &fy), DS_OK);
  EXPECT_EQ(Take(fx), Take(fy));
  EXPECT_EQ(ds_fingerprint("{", &fx), DS_ERR_PARSE);
}

TEST(CApiTest, ExecuteSql) {
  char* out = nullptr;
  ASSERT_EQ(ds_execute_sql(":memory:", "SELECT 1 AS one", 5, 100, &out), DS_OK);
  const json j = json::parse(Take(out));
  EXPECT_EQ(j["columns"][0], "one");
  ASSERT_EQ(ds_execute_sql(":memory:", "SELEC", 5, 100, &out), DS_OK);
  EXPECT_EQ(json::parse(Take(out))["error"]["kind"], "SyntaxError");
}

TEST(CApiTest, OutcomeMatrix) {
  ds_outcome_matrix* m = nullptr;
  ASSERT_EQ(ds_outcome_matrix_create(&m), DS_OK);
  EXPECT_EQ(ds_outcome_matrix_append(m, "s1", "x1", 1), DS_ERR_UNKNOWN_ID);
  for (const char* s : {"s1", "s2"}) ASSERT_EQ(ds_outcome_matrix_register(m, s, nullptr), DS_OK);
  for (const char* x : {"x1", "x2", "x3"}) {
    ASSERT_EQ(ds_outcome_matrix_register(m, nullptr, x), DS_OK);
  }
  ASSERT_EQ(ds_outcome_matrix_append(m, "s1", "x1", 1), DS_OK);
  ASSERT_EQ(ds_outcome_matrix_append(m, "s2", "x2", 1), DS_OK);
  const char* inst[] = {"x1", "x2", "x3"};
  const char* skills[] = {"s1", "s2"};
  char* ids = nullptr;
  ASSERT_EQ(ds_outcome_matrix_residual(m, inst, 3, skills, 2, &ids), DS_OK);
  EXPECT_EQ(json::parse(Take(ids)), json::array({"x3"}));
  char* jsonl = nullptr;
  ASSERT_EQ(ds_outcome_matrix_to_jsonl(m, &jsonl), DS_OK);
  const std::string text = Take(jsonl);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  ds_outcome_matrix_free(m);
}

TEST(CApiTest, CommandsTakeJsonArguments) {
  ds_context* ctx = nullptr;
  ASSERT_EQ(ds_context_create(&ctx), DS_OK);
  ASSERT_EQ(ds_context_set_jobs(ctx, 2), DS_OK);
  char* report = nullptr;
  ASSERT_EQ(ds_verify_greedy(ctx, R"({"skills":5,"instances":10,"k":2,"trials":10,"seed":1})",
                             &report),
            DS_OK);
  EXPECT_TRUE(json::parse(Take(report))["violations"].empty());
  EXPECT_EQ(ds_verify_greedy(ctx, R"({"skils":5})", &report), DS_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(ds_last_error()).find("skils"), std::string::npos);
  EXPECT_EQ(ds_verify_greedy(ctx, R"({"k":"two"})", &report), DS_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ds_verify_greedy(ctx, "[1]", &report), DS_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(ds_optimize(ctx, R"({"train":"/nonexistent.jsonl","out":"/tmp/x",
                                 "set":"{\"run\":{\"rng_seed\":1,\"K\":1}}"})",
                        &report),
            DS_ERR_CONFIG);
  EXPECT_NE(std::string(ds_last_error()).find("seed pool"), std::string::npos);
  ds_context_free(ctx);
}

}  // namespace
