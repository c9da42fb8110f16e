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

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "actions/action.hpp"
#include "actions/errors.hpp"
#include "actions/graph.hpp"
#include "actions/vocab.hpp"
#include "json.hpp"

namespace actions {

// Thrown by ground_request when the filled action fails its own specs.
class ValidationFailed : public Error {
 public:
  explicit ValidationFailed(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

enum class BindingLocation { kQuery, kPath, kBody, kHeader };
enum class Transform { kIdentity, kDateToIso, kNumberToText, kBooleanNegate, kPriceToFreeFlag };

std::string_view to_string(BindingLocation l);
std::string_view to_string(Transform t);

/// Applies \p t to a schema-side value on its way to the native API.
Literal apply_transform(Transform t, const Literal& in);

struct InputBinding {
  PropertyPath spec_path;
  BindingLocation location = BindingLocation::kQuery;
  std::string native_name;
  Transform transform = Transform::kIdentity;
};

struct OutputBinding {
  std::string native_path;  // "a.b", "rooms[*].id"
  PropertyPath schema_path;  // relative to each lifted root
  LiteralKind literal_kind = LiteralKind::kText;
};

struct FieldBinding {
  // Relative to the native element a root came from; "$." addresses the
  // document root instead.
  std::string from_native_path;
  PropertyPath to_spec_default_path;
};

struct ResponseCondition {
  std::optional<std::string> node_type;
  std::optional<std::pair<std::string, nlohmann::json>> field_equals;
};

struct ResponseAction {
  std::optional<ResponseCondition> condition;
  std::string action_ref;
  std::vector<FieldBinding> bind_fields;
};

struct ResourceMapping {
  std::string resource_id;
  ActionDescriptor descriptor;
  std::string native_method = "GET";
  std::string native_path_template;
  std::vector<InputBinding> input_bindings;
  std::vector<OutputBinding> output_bindings;
  std::vector<std::string> result_types;
  std::vector<ResponseAction> response_actions;
};

struct NativeRequest {
  std::string method;
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::optional<std::string> body;

  /// First header named \p name (case-insensitive).
  std::optional<std::string> header(std::string_view name) const;
  void set_header(const std::string& name, const std::string& value);
  friend bool operator==(const NativeRequest&, const NativeRequest&) = default;
};

class MappingDocument {
 public:
  std::string id;
  std::string backend_base_url;
  std::vector<ResourceMapping> resources;

  const ResourceMapping* find(std::string_view resource_id) const;
  const ResourceMapping& at(std::string_view resource_id) const;  // throws FormatError
  /// Resources reachable only as potential actions are not published.
  bool is_published(std::string_view resource_id) const;
  const Vocabulary& vocabulary() const { return *vocab_; }
  std::shared_ptr<const Vocabulary> vocabulary_ptr() const { return vocab_; }

  /// Copy whose descriptors point at \p base + "/invoke/<resourceId>" with a
  /// uniform POST of an ld+json action instance.
  MappingDocument with_entry_base(const std::string& base) const;
  MappingDocument with_backend(const std::string& base_url) const;

 private:
  friend MappingDocument load_mapping(std::string_view, std::shared_ptr<const Vocabulary>);
  std::shared_ptr<const Vocabulary> vocab_;
};

/// Throws FormatError, UnresolvedActionRef or DescriptorInvalid.
MappingDocument load_mapping(std::string_view document, std::shared_ptr<const Vocabulary> v);

/// Throws ValidationFailed, MissingPathValue or MissingCredentials.
NativeRequest ground_request(const MappingDocument& m, std::string_view resource_id, const EntityGraph& filled,
                             const AuthenticationSpec& auth);

NativeRequest build_auth_header(const AuthenticationSpec& a, NativeRequest req);

/// Value at a dotted native path ("a.b.c"); nullptr when absent.
const nlohmann::json* native_lookup(const nlohmann::json& doc, std::string_view path);

// What the lifted roots came from, so conditions and bindings can look at
// native fields that were never mapped into the graph.
struct NativeOrigin {
  nlohmann::json document;
  std::vector<nlohmann::json> elements;  // one per root
};

/// Throws NativeParseError when a 2xx body is not JSON.
EntityGraph lift_response(const MappingDocument& m, std::string_view resource_id, std::string_view native_body,
                          int native_status);

EntityGraph attach_potential_actions(const MappingDocument& m, std::string_view resource_id,
                                     const EntityGraph& lifted, const NativeOrigin& origin);

}  // namespace actions
