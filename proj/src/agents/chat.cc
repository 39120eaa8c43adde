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

#include "agents/chat.h"

#include <thread>

#include "absl/strings/ascii.h"
#include "core/errors.h"
#include "glog/logging.h"

namespace divskill::agents {

nlohmann::json ChatMessageToJson(const ChatMessage& m) {
  nlohmann::json j = {{"role", m.role}, {"content", m.content}};
  if (!m.tool_calls.empty()) {
    nlohmann::json calls = nlohmann::json::array();
    for (const ToolCall& c : m.tool_calls) {
      calls.push_back({{"id", c.id},
                       {"type", "function"},
                       {"function", {{"name", c.name}, {"arguments", c.arguments}}}});
    }
    j["tool_calls"] = std::move(calls);
  }
  if (!m.tool_call_id.empty()) j["tool_call_id"] = m.tool_call_id;
  return j;
}

nlohmann::json ChatRequestToJson(const ChatRequest& request) {
  nlohmann::json messages = nlohmann::json::array();
  for (const ChatMessage& m : request.messages) {
    messages.push_back(ChatMessageToJson(m));
  }
  nlohmann::json body = {{"model", request.model},
                         {"messages", std::move(messages)},
                         {"temperature", request.temperature},
                         {"max_tokens", request.max_tokens}};
  if (request.seed.has_value()) body["seed"] = *request.seed;
  if (!request.tools.empty()) {
    nlohmann::json tools = nlohmann::json::array();
    for (const ToolSchema& t : request.tools) {
      tools.push_back({{"type", "function"},
                       {"function",
                        {{"name", t.name},
                         {"description", t.description},
                         {"parameters", t.parameters}}}});
    }
    body["tools"] = std::move(tools);
  }
  return body;
}

absl::StatusOr<ChatMessage> ParseChatResponse(const nlohmann::json& body) {
  const nlohmann::json* message = &body;
  if (body.is_object() && body.contains("choices")) {
    const auto& choices = body["choices"];
    if (!choices.is_array() || choices.empty() ||
        !choices[0].contains("message")) {
      return MakeError(ErrorKind::kTransportError,
                       "response has no choices[0].message");
    }
    message = &choices[0]["message"];
  }
  if (!message->is_object()) {
    return MakeError(ErrorKind::kTransportError, "response message is not an object");
  }
  ChatMessage out;
  out.role = message->value("role", std::string("assistant"));
  if (message->contains("content") && (*message)["content"].is_string()) {
    out.content = (*message)["content"].get<std::string>();
  }
  if (message->contains("tool_calls") && (*message)["tool_calls"].is_array()) {
    for (const auto& call : (*message)["tool_calls"]) {
      ToolCall tc;
      tc.id = call.value("id", std::string());
      const nlohmann::json fn = call.value("function", nlohmann::json::object());
      tc.name = fn.value("name", call.value("name", std::string()));
      const nlohmann::json args =
          fn.contains("arguments") ? fn["arguments"]
                                   : call.value("arguments", nlohmann::json());
      tc.arguments = args.is_string() ? args.get<std::string>() : args.dump();
      out.tool_calls.push_back(std::move(tc));
    }
  }
  return out;
}

absl::StatusOr<ChatMessage> CompleteWithRetry(ChatClient& client,
                                              const ChatRequest& request,
                                              const RetryPolicy& policy) {
  auto backoff = policy.initial_backoff;
  absl::StatusOr<ChatMessage> last =
      MakeError(ErrorKind::kTransportError, "no attempt made");
  for (int attempt = 1; attempt <= std::max(1, policy.max_attempts); ++attempt) {
    last = client.Complete(request);
    if (last.ok() || KindOf(last.status()) != ErrorKind::kTransportError) {
      return last;
    }
    LOG(WARNING) << "chat attempt " << attempt << " failed: " << last.status();
    if (attempt < policy.max_attempts && backoff.count() > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  return last;
}

std::string ExtractSqlBlock(const std::string& text) {
  size_t open = text.find("```");
  while (open != std::string::npos) {
    size_t line_end = text.find('\n', open);
    if (line_end == std::string::npos) return {};
    const std::string lang = absl::AsciiStrToLower(
        absl::StripAsciiWhitespace(text.substr(open + 3, line_end - open - 3)));
    const size_t close = text.find("```", line_end);
    if (close == std::string::npos) return {};
    if (lang.empty() || lang == "sql" || lang == "sqlite") {
      return std::string(
          absl::StripAsciiWhitespace(text.substr(line_end + 1, close - line_end - 1)));
    }
    open = text.find("```", close + 3);
  }
  return {};
}

}  // namespace divskill::agents
