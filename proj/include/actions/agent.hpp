// Copyright 2026 The actionctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "actions/action.hpp"
#include "actions/graph.hpp"
#include "actions/vocab.hpp"
#include "json.hpp"

namespace actions {

enum class FlowState { kDiscovering, kEliciting, kReadyToInvoke, kPresenting, kCompleted, kFailed };

std::string_view to_string(FlowState s);

struct SlotPrompt {
  PropertyPath path;
  std::string datatype;
  std::string label;  // "checkin time"
  PropertyValueSpecification spec;
};

struct Choice {
  NodeRef root;  // in the session's last result
  std::string label;
  ActionDescriptor action;
};

struct TranscriptEntry {
  std::string speaker;  // "agent" or "user"
  std::string event;
  std::string text;
};

struct FlowSession {
  std::string id;
  FlowState state = FlowState::kDiscovering;
  std::vector<ActionDescriptor> entry_actions;
  std::optional<ActionDescriptor> current_action;
  std::vector<SlotPrompt> pending_slots;
  // Values the user supplied, in fill order; filled is rebuilt from them.
  std::vector<std::pair<PropertyPath, Literal>> values;
  EntityGraph filled;
  std::optional<EntityGraph> last_result;
  std::vector<Choice> choices;
  std::vector<TranscriptEntry> transcript;
  std::optional<std::string> last_error;
  nlohmann::ordered_json last_violations = nlohmann::ordered_json::array();
  int last_status = 0;
};

struct HttpResult {
  int status = 0;  // 0: no response
  std::string body;
  std::string error;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResult get(const std::string& url) = 0;
  virtual HttpResult post(const std::string& url, const std::string& body, const std::string& content_type) = 0;
};

// Plain HTTP via cpp-httplib. https URLs are refused.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::chrono::milliseconds timeout = std::chrono::seconds(10)) : timeout_(timeout) {}
  void set_authorization(std::string value) { authorization_ = std::move(value); }

  HttpResult get(const std::string& url) override;
  HttpResult post(const std::string& url, const std::string& body, const std::string& content_type) override;

 private:
  std::chrono::milliseconds timeout_;
  std::optional<std::string> authorization_;
};

struct Discovery {
  std::vector<ActionDescriptor> actions;
  std::vector<std::string> diagnostics;
};

/// GET <entry>/actions (or \p entry_url itself when it already ends in
/// /actions). Throws TransportError when the gateway cannot be reached.
Discovery discover_actions(Transport& t, const std::string& entry_url, const Vocabulary& v);

/// A session waiting for the user to pick one of \p entry_actions.
FlowSession new_session(std::string id, std::vector<ActionDescriptor> entry_actions);

/// Required inputs without a default become pending slots, in declaration
/// order.
FlowSession start_session(const ActionDescriptor& d, std::string id = {});

/// Throws CoercionError or ConstraintError.
Literal coerce_slot_value(const PropertyValueSpecification& spec, std::string_view raw);

/// Coercion and constraint failures are recorded on the session (transcript
/// and last_error), not thrown. Throws StateError outside Eliciting /
/// ReadyToInvoke and PathError when \p path is not an input of the action.
FlowSession fill_slot(FlowSession s, const PropertyPath& path, std::string_view raw);

FlowSession invoke_current(FlowSession s, Transport& t, const Vocabulary& v);

/// Picks an entry action (Discovering) or a potential action of the last
/// result (Presenting). Throws StateError or IndexOutOfRange.
FlowSession choose(FlowSession s, std::size_t index);

/// Exact intent name first, then a unique prefix.
std::optional<std::size_t> match_intent(const std::vector<ActionDescriptor>& actions, std::string_view query);

std::string capability_summary(const IntentDescriptor& intent);

/// Name of a lifted result root, for menus: its own name, the name of what
/// it offers, else its first type.
std::string describe_root(const EntityGraph& g, NodeRef root);

nlohmann::ordered_json session_to_json(const FlowSession& s);
std::string transcript_jsonl(const FlowSession& s);

}  // namespace actions
