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

// Chat-completion wire types shared by the agent loop, the reflective skill
// optimizer and the pairwise judge.
//
// Request body:
//   {"model", "messages": [{"role", "content", "tool_calls"?, "tool_call_id"?}],
//    "tools": [{"type": "function", "function": {name, description,
//    parameters}}], "temperature", "max_tokens"}
// Response: an OpenAI-style {"choices": [{"message": {...}}]} envelope whose
// message carries assistant text, a tool-call list, or both. A bare message
// object is accepted as well.

#ifndef DIVSKILL_AGENTS_CHAT_H_
#define DIVSKILL_AGENTS_CHAT_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace divskill::agents {

struct ToolCall {
  std::string id;
  std::string name;
  std::string arguments;  // raw JSON text as sent by the model
  friend bool operator==(const ToolCall&, const ToolCall&) = default;
};

struct ChatMessage {
  std::string role;  // system | user | assistant | tool
  std::string content;
  std::vector<ToolCall> tool_calls;
  std::string tool_call_id;
  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ToolSchema {
  std::string name;
  std::string description;
  nlohmann::json parameters;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  std::vector<ToolSchema> tools;
  double temperature = 0.2;
  int max_tokens = 64000;
  std::optional<uint64_t> seed;
};

nlohmann::json ChatRequestToJson(const ChatRequest& request);
absl::StatusOr<ChatMessage> ParseChatResponse(const nlohmann::json& body);
nlohmann::json ChatMessageToJson(const ChatMessage& message);

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  // Transport problems come back as TransportError.
  virtual absl::StatusOr<ChatMessage> Complete(const ChatRequest& request) = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
};

// Retries TransportError with exponential backoff; other errors pass through.
absl::StatusOr<ChatMessage> CompleteWithRetry(ChatClient& client,
                                              const ChatRequest& request,
                                              const RetryPolicy& policy);

// Extracts the body of the first ```sql fenced block (or any fenced block).
std::string ExtractSqlBlock(const std::string& text);

}  // namespace divskill::agents

#endif  // DIVSKILL_AGENTS_CHAT_H_
