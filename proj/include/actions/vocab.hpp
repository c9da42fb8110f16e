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
#include <string_view>
#include <vector>

#include "actions/graph.hpp"

namespace actions {

struct ClassDef {
  std::string name;
  std::vector<std::string> sub_class_of;
};

struct PropertyDef {
  std::string name;
  std::vector<std::string> sub_property_of;
  std::vector<std::string> domain_includes;  // empty: any typed subject
  std::vector<std::string> range_includes;   // classes or datatypes, never empty
};

/// Built-in datatype names usable in rangeIncludes without a declaration.
/// Integer is a Number and URL is a Text.
bool is_datatype(std::string_view name);

// Classes and properties keyed by local (or prefixed) name, with the
// reflexive-transitive closures of subClassOf and subPropertyOf precomputed.
class Vocabulary {
 public:
  Vocabulary() = default;

  using ClassMap = std::map<std::string, ClassDef, std::less<>>;
  using PropertyMap = std::map<std::string, PropertyDef, std::less<>>;

  const ClassMap& classes() const { return classes_; }
  const PropertyMap& properties() const { return properties_; }

  bool has_class(std::string_view name) const;
  bool has_property(std::string_view name) const;
  const PropertyDef& property(std::string_view name) const;  // throws UnknownTerm

  /// Reflexive-transitive superclasses of a declared class: the class itself
  /// first, then breadth-first in declaration order. Throws UnknownTerm.
  const std::vector<std::string>& superclasses(std::string_view name) const;
  const std::vector<std::string>& superproperties(std::string_view name) const;

  bool is_subclass_of(std::string_view a, std::string_view b) const;
  bool is_subproperty_of(std::string_view p, std::string_view q) const;

  /// Builds and checks a vocabulary: unique names, no dangling references,
  /// no subclass/subproperty cycles other than self-loops.
  static Vocabulary build(std::vector<ClassDef> classes, std::vector<PropertyDef> properties);

 private:
  ClassMap classes_;
  PropertyMap properties_;
  std::map<std::string, std::vector<std::string>, std::less<>> class_closure_;
  std::map<std::string, std::vector<std::string>, std::less<>> property_closure_;
};

/// Parses one vocabulary file. Throws FormatError, DanglingReference or
/// CycleError.
Vocabulary load_vocabulary(std::string_view document);

/// Merges several vocabulary files (e.g. schema.org subset plus extension)
/// before checking references across them.
Vocabulary load_vocabulary(const std::vector<std::string>& documents);

/// Files and directories (every *.json inside, sorted by name). Throws
/// FormatError when nothing is readable.
Vocabulary load_vocabulary_paths(const std::vector<std::string>& paths);

bool is_subclass_of(const Vocabulary& v, std::string_view a, std::string_view b);
bool is_subproperty_of(const Vocabulary& v, std::string_view p, std::string_view q);

/// Keys of the form "<property>-input" / "<property>-output" carry
/// property-value specifications rather than data.
struct SpecKey {
  std::string property;
  bool input = true;
};
std::optional<SpecKey> parse_spec_key(std::string_view key);

/// Type inheritance and property inheritance to a fixpoint. Throws
/// UnknownTerm when the graph uses an undeclared class or property.
EntityGraph entail_closure(const EntityGraph& g, const Vocabulary& v);

/// Same rules, silently skipping undeclared terms.
EntityGraph entail_closure_lenient(const EntityGraph& g, const Vocabulary& v);

bool check_property_applicability(const Vocabulary& v, const Node& node, std::string_view property);

/// \p g is the graph owning \p value when it is a node reference.
bool check_value_admissibility(const Vocabulary& v, const EntityGraph& g, std::string_view property,
                               const Value& value);

enum class ViolationCode {
  kUntypedSubject,
  kDomainViolation,
  kRangeViolation,
  kUnknownProperty,
  kUnknownType,
  kMissingRequired,
  kConstraintViolation,
  kMissingPromised,
};

std::string_view to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::optional<NodeRef> node;
  std::string subject;   // @id or blank label, empty when no node applies
  std::string property;
  std::string path;      // spec path for request/response checks
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool empty() const { return violations.empty(); }
  std::size_t count(ViolationCode code) const;
  void append(const ValidationReport& other);

  nlohmann::ordered_json to_json() const;
  std::string to_table() const;
};

/// Closed-world check of every (node, property, value) triple after
/// entailment.
ValidationReport validate_graph(const EntityGraph& g, const Vocabulary& v);

}  // namespace actions
