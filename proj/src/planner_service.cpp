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

#include "interplay/planner_service.hpp"

#include <httplib.h>

#include <cstdlib>
#include <json.hpp>
#include <regex>

#include "interplay/errors.hpp"

namespace interplay {

namespace {

constexpr const char* kSystemMessage =
    "You are a planning agent for image composition. Answer in the requested format.";

std::string strip_markdown(std::string text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != '*' && c != '`') out.push_back(c);
  }
  return out;
}

// Straight or curly double-quoted substrings, in order.
std::vector<std::string> quoted(const std::string& line) {
  static const std::regex re("(?:\"([^\"]*)\"|\xE2\x80\x9C(.*?)\xE2\x80\x9D)");
  std::vector<std::string> out;
  for (std::sregex_iterator it(line.begin(), line.end(), re), end; it != end; ++it) {
    out.push_back((*it)[1].matched ? (*it)[1].str() : (*it)[2].str());
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n-");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

const char* const kFormatReminder =
    "\n\nYour previous reply did not follow the Format section. Reply again and include the "
    "line \"Overall preferred method: InteractPhys\" or \"Overall preferred method: "
    "InteractMotion\", followed by the segmentation prompts in double quotes (InteractPhys) or "
    "\"The split ratio Sratio is <ratio>, best region R* for insertion is Region <index>.\" "
    "(InteractMotion).";

std::optional<HttpChatConfig> HttpChatConfig::from_env() {
  const char* endpoint = std::getenv(kPlannerEndpointEnv);
  if (endpoint == nullptr || *endpoint == '\0') return std::nullopt;
  HttpChatConfig config;
  config.endpoint = endpoint;
  if (const char* key = std::getenv(kPlannerApiKeyEnv)) config.api_key = key;
  if (const char* model = std::getenv(kPlannerModelEnv); model != nullptr && *model != '\0') {
    config.model = model;
  }
  return config;
}

HttpChatBackend::HttpChatBackend(HttpChatConfig config) : config_(std::move(config)) {}

std::string HttpChatBackend::complete(const std::vector<ChatMessage>& messages) {
  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.endpoint, m, url_re)) {
    throw TransportError("planner endpoint is not an http(s) URL: " + config_.endpoint);
  }
  const std::string origin = m[1].str();
  const std::string path = m[2].matched ? m[2].str() : "/";

  nlohmann::json body;
  body["model"] = config_.model;
  body["temperature"] = 0;
  body["messages"] = nlohmann::json::array();
  for (const ChatMessage& msg : messages) {
    body["messages"].push_back({{"role", msg.role}, {"content", msg.content}});
  }

  httplib::Client client(origin);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
  const auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw TransportError("planner request to " + config_.endpoint +
                         " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError("planner service answered HTTP " + std::to_string(res->status) + ": " +
                         res->body.substr(0, 200));
  }
  try {
    const auto reply = nlohmann::json::parse(res->body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("planner reply is not a chat completion: ") + e.what());
  }
}

std::string ReplayBackend::complete(const std::vector<ChatMessage>& messages) {
  requests_.push_back(messages);
  if (next_ >= replies_.size()) throw TransportError("replay backend has no more replies");
  return replies_[next_++];
}

PlannerDecision parse_planner_response(const std::string& raw) {
  const std::string text = strip_markdown(raw);
  static const std::regex method_re(R"(overall preferred method\s*:\s*([^\n]*))",
                                    std::regex::icase);
  std::smatch m;
  if (!std::regex_search(text, m, method_re)) {
    throw FormatError("reply has no \"Overall preferred method:\" line", raw);
  }
  const std::string method_line = m[1].str();
  const auto after_method = static_cast<std::size_t>(m.position(0) + m.length(0));
  static const std::regex phys_re("interactphys", std::regex::icase);
  static const std::regex motion_re("interactmotion", std::regex::icase);
  const bool phys = std::regex_search(method_line, phys_re);
  const bool motion = std::regex_search(method_line, motion_re);
  if (phys == motion) {
    throw FormatError("method line names " + std::string(phys ? "both methods" : "no method") +
                          ": " + method_line,
                      raw);
  }

  PlannerDecision decision;
  static const std::regex expected_re(R"(expected interaction\s*:\s*([^\n]*))", std::regex::icase);
  if (std::smatch e; std::regex_search(text, e, expected_re)) decision.rationale = trim(e[1].str());
  if (decision.rationale.empty()) decision.rationale = trim(method_line);

  if (phys) {
    PhysBranch branch;
    std::size_t start = after_method;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      const std::string line = text.substr(start, end - start);
      static const std::regex prompt_re("prompt", std::regex::icase);
      if (std::regex_search(line, prompt_re)) {
        for (std::string& q : quoted(line)) branch.segmentation_prompts.push_back(trim(q));
      }
      start = end + 1;
    }
    decision.branch = branch;
    return decision;
  }

  static const std::regex split_re(
      R"(split ratio\s*S_?\{?ratio\}?\s*(?:is|=|:)\s*(.*?)\s*[,;]?\s*best region\s*R\*?[^\n]*?region\s*(\d+))",
      std::regex::icase);
  std::smatch s;
  const std::string tail = text.substr(after_method);
  if (!std::regex_search(tail, s, split_re)) {
    throw FormatError("InteractMotion reply has no split ratio / best region line", raw);
  }
  MotionBranch branch;
  SplitRatio split;
  try {
    split = parse_split_ratio(s[1].str());
  } catch (const ParseError& e) {
    throw FormatError(std::string("split ratio does not parse: ") + e.what(), raw);
  }
  branch.split_ratio = to_string(split);
  branch.region = std::stoi(s[2].str());
  if (static_cast<std::size_t>(branch.region) >= split.region_count()) {
    throw FormatError("region " + s[2].str() + " does not exist in split " + branch.split_ratio,
                      raw);
  }
  decision.branch = branch;
  return decision;
}

PlannerDecision service_decide(const ScenarioRequest& request, ChatBackend& backend) {
  const std::string prompt = render_prompt(request);
  std::vector<ChatMessage> messages{{"system", kSystemMessage}, {"user", prompt}};
  const std::string first = backend.complete(messages);
  try {
    return parse_planner_response(first);
  } catch (const FormatError&) {
  }
  messages.back().content = prompt + kFormatReminder;
  return parse_planner_response(backend.complete(messages));
}

}  // namespace interplay
