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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace actions {

inline constexpr std::string_view kSchemaVocab = "http://schema.org/";
inline constexpr std::string_view kWebApiVocab = "https://actions.semantify.it/vocab/";

enum class LiteralKind { kText, kNumber, kBoolean, kDate, kDateTime, kUrl };

std::string_view to_string(LiteralKind kind);
std::optional<LiteralKind> literal_kind_from_string(std::string_view name);

// A scalar value. Numbers keep a canonical decimal lexical form; text-family
// kinds (text, date, datetime, url) all travel as JSON strings, so on the
// wire only the lexical form survives.
struct Literal {
  LiteralKind kind = LiteralKind::kText;
  std::string lexical;

  static Literal text(std::string s);
  static Literal number(double v);
  static Literal integer(std::int64_t v);
  static Literal boolean(bool v);
  static Literal date(std::string iso);
  static Literal datetime(std::string iso);
  static Literal url(std::string iri);

  /// Throws SyntaxError if \p lexical does not parse under \p kind.
  static Literal make(LiteralKind kind, std::string lexical);

  bool is_string_like() const { return kind != LiteralKind::kNumber && kind != LiteralKind::kBoolean; }
  std::optional<double> as_number() const;
  bool is_integral() const;

  nlohmann::json to_json() const;
  static Literal from_json(const nlohmann::json& j);

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct NodeRef {
  std::size_t index = 0;
  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

using Value = std::variant<Literal, NodeRef>;

inline bool is_node(const Value& v) { return std::holds_alternative<NodeRef>(v); }

struct Node {
  std::optional<std::string> id;
  std::vector<std::string> types;
  // Keyed lexicographically; this is the canonical property order everywhere.
  std::map<std::string, std::vector<Value>> properties;

  bool has_type(std::string_view t) const;
  bool is_blank() const { return !id || id->starts_with("_:"); }
};

struct Context {
  std::string vocab{kSchemaVocab};
  std::map<std::string, std::string> prefixes{{"webapi", std::string(kWebApiVocab)}};

  bool is_default() const;
  friend bool operator==(const Context&, const Context&) = default;
};

// A set of typed nodes plus the ordered list of top-level roots. Treated as
// a value: the free functions below that "modify" a graph return a new one.
class EntityGraph {
 public:
  EntityGraph() = default;

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<NodeRef>& roots() const { return roots_; }
  const Context& context() const { return context_; }
  std::size_t size() const { return nodes_.size(); }

  const Node& node(NodeRef ref) const { return nodes_.at(ref.index); }
  Node& node(NodeRef ref) { return nodes_.at(ref.index); }

  // Builder interface, used while a graph is under construction.
  NodeRef add_node(Node node);
  NodeRef add_root(Node node);
  void add_root(NodeRef ref) { roots_.push_back(ref); }
  void set_roots(std::vector<NodeRef> roots) { roots_ = std::move(roots); }
  void set_context(Context ctx) { context_ = std::move(ctx); }
  void add_value(NodeRef subject, const std::string& property, Value v);

  /// Deep-copies the subgraph of \p other reachable from \p root into this
  /// graph and returns the copy of \p root. Shared nodes stay shared.
  NodeRef import(const EntityGraph& other, NodeRef root);

  /// Nodes reachable from the roots, depth-first pre-order, each once.
  std::vector<NodeRef> traversal_order() const;

 private:
  std::vector<Node> nodes_;
  std::vector<NodeRef> roots_;
  Context context_;
};

// Dot-separated path; lowercase-initial segments follow a property,
// uppercase-initial segments keep only nodes carrying that type.
class PropertyPath {
 public:
  struct Segment {
    enum class Kind { kProperty, kType } kind;
    std::string name;
    friend bool operator==(const Segment&, const Segment&) = default;
  };

  PropertyPath() = default;
  /// Throws PathError on empty segments, a leading type-step, or two adjacent
  /// type-steps.
  static PropertyPath parse(std::string_view text);

  const std::vector<Segment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  std::string str() const;

  /// Last property-step name.
  const std::string& terminal_property() const;
  /// Same path with every type-step removed.
  PropertyPath without_types() const;
  /// Path with the first property-step (and a directly following type-step)
  /// removed; empty if nothing remains.
  PropertyPath tail() const;
  PropertyPath parent() const;
  PropertyPath child(const std::string& property) const;

  friend bool operator==(const PropertyPath&, const PropertyPath&) = default;
  friend bool operator<(const PropertyPath& a, const PropertyPath& b) { return a.str() < b.str(); }

 private:
  std::vector<Segment> segments_;
};

/// Parses the supported JSON-LD subset. Throws SyntaxError,
/// UnsupportedFeature or ContextError.
EntityGraph parse_graph(std::string_view document);

/// Roots as a JSON array (always an array, possibly empty).
nlohmann::ordered_json graph_to_json(const EntityGraph& g);

/// Canonical text: a single object for one root, otherwise an array.
std::string serialize_graph(const EntityGraph& g, int indent = -1);

std::vector<Value> get_path(const EntityGraph& g, NodeRef root, const PropertyPath& path);

/// Returns a copy of \p g with \p v appended at \p path, creating intermediate
/// nodes as needed. Throws PathConflict if a mid-path property only holds
/// literals, PathError if the path ends in a type-step.
EntityGraph set_path(const EntityGraph& g, NodeRef root, const PropertyPath& path, const Value& v);

/// In-place variant of set_path for graphs under construction.
void set_path_in_place(EntityGraph& g, NodeRef root, const PropertyPath& path, const Value& v);

/// Name a node for diagnostics: its @id, or "_:n<index>".
std::string subject_label(const EntityGraph& g, NodeRef ref);

}  // namespace actions
