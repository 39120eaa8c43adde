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


#ifndef DIVSKILL_AGENTS_HTTP_CHAT_CLIENT_H_
#define DIVSKILL_AGENTS_HTTP_CHAT_CLIENT_H_

#include <string>

#include "absl/status/statusor.h"
#include "agents/chat.h"

namespace divskill::agents {

inline constexpr char kApiKeyEnv[] = "DIVSKILL_LLM_KEY";

struct HttpChatConfig {
  std::string base_url;  // e.g. https://api.example.com/v1
  std::string api_key;
  int timeout_s = 120;
};

// Reads the API key from DIVSKILL_LLM_KEY; ConfigError when unset.
absl::StatusOr<HttpChatConfig> HttpChatConfigFromEnv(std::string base_url);

// POSTs to <base_url>/chat/completions. Connection failures, 429 and 5xx are
// TransportError; other non-2xx replies are InvalidArgument.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(HttpChatConfig config) : config_(std::move(config)) {}
  absl::StatusOr<ChatMessage> Complete(const ChatRequest& request) override;

 private:
  HttpChatConfig config_;
};

}  // namespace divskill::agents

#endif  // DIVSKILL_AGENTS_HTTP_CHAT_CLIENT_H_
