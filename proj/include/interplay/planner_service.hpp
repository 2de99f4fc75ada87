// Copyright 2026 The Interplay Authors
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

#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include "interplay/planner.hpp"

namespace interplay {

struct ChatMessage {
  std::string role;  // "system" or "user"
  std::string content;
};

// One chat-completion exchange: messages in, assistant text out.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  // Throws TransportError when the service cannot be reached or answers with
  // an error status.
  virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
};

// Environment variable names read by HttpChatConfig::from_env.
inline constexpr const char* kPlannerEndpointEnv = "PLANNER_ENDPOINT";
inline constexpr const char* kPlannerApiKeyEnv = "PLANNER_API_KEY";
inline constexpr const char* kPlannerModelEnv = "PLANNER_MODEL";

struct HttpChatConfig {
  std::string endpoint;  // e.g. https://host/v1/chat/completions
  std::string api_key;
  std::string model = "gpt-4o";
  std::chrono::seconds timeout{60};

  // nullopt when the endpoint variable is unset or empty.
  static std::optional<HttpChatConfig> from_env();
};

// POSTs {"model", "messages": [{"role", "content"}...], "temperature": 0} as
// JSON with "Authorization: Bearer <key>" and reads choices[0].message.content.
class HttpChatBackend : public ChatBackend {
 public:
  explicit HttpChatBackend(HttpChatConfig config);
  std::string complete(const std::vector<ChatMessage>& messages) override;

 private:
  HttpChatConfig config_;
};

// Returns canned replies in order and records every request.
class ReplayBackend : public ChatBackend {
 public:
  explicit ReplayBackend(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  std::string complete(const std::vector<ChatMessage>& messages) override;

  const std::vector<std::vector<ChatMessage>>& requests() const { return requests_; }

 private:
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
  std::vector<std::vector<ChatMessage>> requests_;
};

// Appended to the user message when the first reply does not parse.
extern const char* const kFormatReminder;

// Parses a reply that follows the prompt's Format section. Throws FormatError
// carrying `text` when the method line, or the Motion split/region line, is
// missing or malformed.
PlannerDecision parse_planner_response(const std::string& text);

// System + user exchange with one retry on a malformed reply.
PlannerDecision service_decide(const ScenarioRequest& request, ChatBackend& backend);

}  // namespace interplay
