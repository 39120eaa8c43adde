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


#include "agents/http_chat_client.h"

#include <cstdlib>

#include "absl/strings/str_cat.h"
#include "core/errors.h"
#include "httplib.h"

namespace divskill::agents {

absl::StatusOr<HttpChatConfig> HttpChatConfigFromEnv(std::string base_url) {
  if (base_url.empty()) {
    return MakeError(ErrorKind::kConfigError, "llm base_url is not configured");
  }
  const char* key = std::getenv(kApiKeyEnv);
  if (key == nullptr || *key == '\0') {
    return MakeError(ErrorKind::kConfigError,
                     absl::StrCat("environment variable ", kApiKeyEnv, " is not set"));
  }
  return HttpChatConfig{std::move(base_url), key};
}

absl::StatusOr<ChatMessage> HttpChatClient::Complete(const ChatRequest& request) {
  // httplib wants scheme://host[:port] and the path separately.
  const std::string& url = config_.base_url;
  const size_t scheme_end = url.find("://");
  const size_t path_start =
      url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  const std::string origin = url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  path += "/chat/completions";

  httplib::Client client(origin);
  client.set_connection_timeout(config_.timeout_s, 0);
  client.set_read_timeout(config_.timeout_s, 0);
  client.set_write_timeout(config_.timeout_s, 0);
  const httplib::Headers headers = {
      {"Authorization", absl::StrCat("Bearer ", config_.api_key)}};
  auto response = client.Post(path, headers, ChatRequestToJson(request).dump(),
                              "application/json");
  if (!response) {
    return MakeError(ErrorKind::kTransportError,
                     absl::StrCat("POST ", origin, path, ": ",
                                  httplib::to_string(response.error())));
  }
  if (response->status == 429 || response->status >= 500) {
    return MakeError(ErrorKind::kTransportError,
                     absl::StrCat("HTTP ", response->status));
  }
  if (response->status < 200 || response->status >= 300) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("HTTP ", response->status, ": ",
                                  response->body.substr(0, 500)));
  }
  nlohmann::json body = nlohmann::json::parse(response->body, nullptr, false);
  if (body.is_discarded()) {
    return MakeError(ErrorKind::kTransportError, "response body is not JSON");
  }
  return ParseChatResponse(body);
}

}  // namespace divskill::agents
