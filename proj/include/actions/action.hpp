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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "actions/graph.hpp"
#include "actions/vocab.hpp"

namespace actions {

struct EntryPoint {
  std::string url_template;
  std::string http_method = "GET";
  std::string encoding_type;
  std::string content_type;

  /// Variable names referenced by {...} expressions, in order of appearance.
  std::vector<std::string> placeholders() const;
  /// Level-1 and "{?a,b}" form-style expansion; unknown variables expand to
  /// nothing.
  std::string expand(const std::map<std::string, std::string>& vars) const;

  friend bool operator==(const EntryPoint&, const EntryPoint&) = default;
};

bool is_http_method(std::string_view method);

enum class SpecDirection { kInput, kOutput };

// One "<property>-input" or "<property>-output" declaration. The path is
// relative to the action node and contains property steps only; the types
// of intermediate nodes live on the descriptor.
struct PropertyValueSpecification {
  PropertyPath path;
  SpecDirection direction = SpecDirection::kInput;
  bool value_required = false;
  std::optional<std::string> value_name;
  std::optional<Literal> default_value;
  std::optional<double> min_value;
  std::optional<double> max_value;
  std::optional<std::int64_t> value_min_length;
  std::optional<std::int64_t> value_max_length;
  std::optional<std::string> value_pattern;
  bool multiple_values = false;
  // Resolved from the vocabulary: the first datatype in the range of the
  // terminal property, "Text" when nothing better is known.
  std::string datatype = "Text";

  friend bool operator==(const PropertyValueSpecification&, const PropertyValueSpecification&) = default;
};

/// Violated constraints (bounds, length, pattern) for a single value.
std::vector<std::string> check_value_constraints(const PropertyValueSpecification& spec, const Value& value);

enum class AuthMethod { kNone, kToken, kBasic, kCustom };
enum class AuthPlacement { kHeader, kBody, kUrl };

std::string_view to_string(AuthMethod m);
std::string_view to_string(AuthPlacement p);

struct AuthenticationSpec {
  AuthMethod method = AuthMethod::kNone;
  std::string token;
  // custom only
  AuthPlacement placement = AuthPlacement::kHeader;
  std::string name;
  std::string value;
  // Ids of webapi:AuthenticateAction nodes advertised next to the credential.
  // Listed for clients, never executed here.
  std::vector<std::string> authenticate_actions;

  friend bool operator==(const AuthenticationSpec&, const AuthenticationSpec&) = default;
};

struct ActionDescriptor {
  std::string id;
  std::string action_type;
  std::vector<std::string> object_types;
  std::vector<std::string> result_types;
  // Types of other typed intermediate nodes (e.g. "agent" -> Person,
  // "object.containsPlace" -> HotelRoom), keyed by property-only path.
  std::map<std::string, std::vector<std::string>> nested_types;
  EntryPoint entry_point;
  std::vector<PropertyValueSpecification> inputs;
  std::vector<PropertyValueSpecification> outputs;
  AuthenticationSpec auth;
  std::string error_type = "Thing";

  const PropertyValueSpecification* find_input(const PropertyPath& path) const;
  /// Types recorded for a property-only prefix ("object", "result", nested).
  std::vector<std::string> types_at(const std::string& prefix) const;

  friend bool operator==(const ActionDescriptor&, const ActionDescriptor&) = default;
};

struct Slot {
  PropertyPath path;
  std::string prompt_name;
  std::string datatype;
  friend bool operator==(const Slot&, const Slot&) = default;
};

struct IntentDescriptor {
  std::string name;
  std::string action_id;
  std::vector<Slot> required_slots;
  std::vector<Slot> optional_slots;
};

/// Reads the action rooted at \p root. Throws NotAnAction, MissingTarget,
/// MalformedSpec or ConflictingSpecs.
ActionDescriptor parse_action(const EntityGraph& g, NodeRef root, const Vocabulary& v);

/// Canonical annotation graph for \p d (single root).
EntityGraph serialize_action(const ActionDescriptor& d);

/// A request graph with the action root, typed intermediate nodes and every
/// default value already written.
EntityGraph request_skeleton(const ActionDescriptor& d);

ValidationReport validate_request_inputs(const ActionDescriptor& d, const EntityGraph& filled,
                                         const Vocabulary& v);

ValidationReport validate_response_outputs(const ActionDescriptor& d, const EntityGraph& response,
                                           const Vocabulary& v);

IntentDescriptor extract_intent(const ActionDescriptor& d);

}  // namespace actions
