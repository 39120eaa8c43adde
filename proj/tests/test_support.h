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


#ifndef DIVSKILL_TESTS_TEST_SUPPORT_H_
#define DIVSKILL_TESTS_TEST_SUPPORT_H_

#include <sqlite3.h>

#include <deque>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "agents/chat.h"
#include "core/errors.h"
#include "core/types.h"

namespace divskill::testing {

// Replays a fixed list of assistant replies; once exhausted it answers with
// plain text (no tool calls).
class ScriptedChatClient : public agents::ChatClient {
 public:
  explicit ScriptedChatClient(std::vector<agents::ChatMessage> replies)
      : replies_(replies.begin(), replies.end()) {}

  absl::StatusOr<agents::ChatMessage> Complete(
      const agents::ChatRequest& request) override {
    requests.push_back(request);
    if (replies_.empty()) return agents::ChatMessage{"assistant", "done", {}, {}};
    agents::ChatMessage m = replies_.front();
    replies_.pop_front();
    return m;
  }

  std::vector<agents::ChatRequest> requests;

 private:
  std::deque<agents::ChatMessage> replies_;
};

inline agents::ChatMessage ToolReply(std::string content, std::string tool,
                                     std::string args_json) {
  static int next_id = 0;
  return {"assistant",
          std::move(content),
          {{"call_" + std::to_string(next_id++), std::move(tool), std::move(args_json)}},
          {}};
}

inline std::string SqlArg(const std::string& key, const std::string& sql) {
  return nlohmann::json{{key, sql}}.dump();
}

// A scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("divskill_test_" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Creates a small SQLite database with tables `orders` and `customers`.
inline std::string MakeShopDb(const std::filesystem::path& dir) {
  const std::string path = (dir / "shop.db").string();
  sqlite3* db = nullptr;
  sqlite3_open(path.c_str(), &db);
  sqlite3_exec(db,
               "CREATE TABLE customers(id INTEGER PRIMARY KEY, name TEXT, region TEXT);"
               "CREATE TABLE orders(id INTEGER PRIMARY KEY, customer_id INTEGER, "
               "amount REAL);"
               "INSERT INTO customers VALUES (1,'ada','north'),(2,'bob','south'),"
               "(3,'cy','north');"
               "INSERT INTO orders VALUES (1,1,10.5),(2,1,4.5),(3,2,7.0),(4,3,1.25);",
               nullptr, nullptr, nullptr);
  sqlite3_close(db);
  return path;
}

inline Instance ShopInstance(const std::string& db, std::string gold_sql) {
  Instance inst;
  inst.instance_id = "shop-1";
  inst.question = "Total order amount per region?";
  inst.db_ref = db;
  inst.gold.sql = std::move(gold_sql);
  return inst;
}

}  // namespace divskill::testing

#endif  // DIVSKILL_TESTS_TEST_SUPPORT_H_
