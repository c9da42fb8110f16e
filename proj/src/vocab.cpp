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

#include "actions/vocab.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "actions/errors.hpp"
#include "actions/text.hpp"

namespace actions {

using nlohmann::json;

namespace {

constexpr std::string_view kDatatypes[] = {"Text", "Number", "Integer", "Boolean",
                                           "Date", "DateTime", "URL"};

constexpr std::string_view kSpecType = "PropertyValueSpecification";

template <typename Map>
std::vector<std::string> bfs_closure(const Map& defs, const std::string& start,
                                     std::vector<std::string> (*parents)(const typename Map::mapped_type&)) {
  std::vector<std::string> order{start};
  std::set<std::string> seen{start};
  std::deque<std::string> queue{start};
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    for (const auto& p : parents(defs.find(cur)->second)) {
      if (seen.insert(p).second) {
        order.push_back(p);
        queue.push_back(p);
      }
    }
  }
  return order;
}

std::vector<std::string> class_parents(const ClassDef& c) { return c.sub_class_of; }
std::vector<std::string> property_parents(const PropertyDef& p) { return p.sub_property_of; }

// Colors: 0 unvisited, 1 on stack, 2 done.
template <typename Map>
void check_acyclic(const Map& defs, std::vector<std::string> (*parents)(const typename Map::mapped_type&),
                   const char* relation) {
  std::map<std::string, int> color;
  std::vector<std::string> trail;
  std::function<void(const std::string&)> visit = [&](const std::string& name) {
    color[name] = 1;
    trail.push_back(name);
    for (const auto& p : parents(defs.find(name)->second)) {
      if (p == name) continue;
      if (color[p] == 1) {
        auto from = std::find(trail.begin(), trail.end(), p);
        std::string cycle;
        for (auto it = from; it != trail.end(); ++it) cycle += *it + " -> ";
        throw CycleError(std::string(relation) + " cycle: " + cycle + p);
      }
      if (color[p] == 0) visit(p);
    }
    trail.pop_back();
    color[name] = 2;
  };
  for (const auto& [name, _] : defs) {
    if (color[name] == 0) visit(name);
  }
}

std::vector<std::string> string_list(const json& entry, const char* key, const std::string& owner) {
  std::vector<std::string> out;
  auto it = entry.find(key);
  if (it == entry.end()) return out;
  if (!it->is_array()) throw FormatError(owner + ": '" + key + "' must be an array");
  for (const auto& s : *it) {
    if (!s.is_string() || s.get<std::string>().empty())
      throw FormatError(owner + ": '" + key + "' entries must be non-empty strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

void parse_into(std::string_view document, std::vector<ClassDef>& classes,
                std::vector<PropertyDef>& properties) {
  json doc = json::parse(document, nullptr, false);
  if (doc.is_discarded()) throw FormatError("vocabulary is not valid JSON");
  if (!doc.is_object()) throw FormatError("vocabulary must be a JSON object");
  for (const char* section : {"classes", "properties"}) {
    if (doc.contains(section) && !doc[section].is_array())
      throw FormatError(std::string("'") + section + "' must be an array");
  }
  auto name_of = [](const json& entry, const char* what) {
    if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string() ||
        entry["name"].get<std::string>().empty())
      throw FormatError(std::string(what) + " entry without a name");
    return entry["name"].get<std::string>();
  };
  for (const auto& entry : doc.value("classes", json::array())) {
    auto name = name_of(entry, "class");
    classes.push_back({name, string_list(entry, "subClassOf", name)});
  }
  for (const auto& entry : doc.value("properties", json::array())) {
    auto name = name_of(entry, "property");
    PropertyDef p{name, string_list(entry, "subPropertyOf", name),
                  string_list(entry, "domainIncludes", name), string_list(entry, "rangeIncludes", name)};
    if (p.range_includes.empty()) throw FormatError("property '" + name + "' has no rangeIncludes");
    properties.push_back(std::move(p));
  }
}

bool literal_admits(const Literal& lit, std::string_view datatype) {
  switch (lit.kind) {
    case LiteralKind::kNumber:
      return datatype == "Number" || (datatype == "Integer" && lit.is_integral());
    case LiteralKind::kBoolean:
      return datatype == "Boolean";
    default:
      if (datatype == "Text") return true;
      if (datatype == "URL") return text::is_iri(lit.lexical);
      if (datatype == "Date") return text::is_iso_date(lit.lexical);
      if (datatype == "DateTime") return text::is_iso_datetime(lit.lexical);
      return false;
  }
}

EntityGraph closure_impl(const EntityGraph& g, const Vocabulary& v, bool strict) {
  EntityGraph out = g;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Node& src = g.node(NodeRef{i});
    Node& dst = out.node(NodeRef{i});
    for (const auto& t : src.types) {
      if (!v.has_class(t)) {
        if (strict) throw UnknownTerm("undeclared class '" + t + "'");
        continue;
      }
      for (const auto& super : v.superclasses(t)) {
        if (!dst.has_type(super)) dst.types.push_back(super);
      }
    }
    for (const auto& [key, values] : src.properties) {
      if (parse_spec_key(key)) continue;
      if (!v.has_property(key)) {
        if (strict) throw UnknownTerm("undeclared property '" + key + "'");
        continue;
      }
      for (const auto& super : v.superproperties(key)) {
        if (super == key) continue;
        auto& slot = dst.properties[super];
        for (const auto& val : values) {
          if (std::find(slot.begin(), slot.end(), val) == slot.end()) slot.push_back(val);
        }
      }
    }
  }
  return out;
}

}  // namespace

bool is_datatype(std::string_view name) {
  return std::find(std::begin(kDatatypes), std::end(kDatatypes), name) != std::end(kDatatypes);
}

bool Vocabulary::has_class(std::string_view name) const { return classes_.find(name) != classes_.end(); }

bool Vocabulary::has_property(std::string_view name) const {
  return properties_.find(name) != properties_.end();
}

const PropertyDef& Vocabulary::property(std::string_view name) const {
  auto it = properties_.find(name);
  if (it == properties_.end()) throw UnknownTerm("undeclared property '" + std::string(name) + "'");
  return it->second;
}

const std::vector<std::string>& Vocabulary::superclasses(std::string_view name) const {
  auto it = class_closure_.find(name);
  if (it == class_closure_.end()) throw UnknownTerm("undeclared class '" + std::string(name) + "'");
  return it->second;
}

const std::vector<std::string>& Vocabulary::superproperties(std::string_view name) const {
  auto it = property_closure_.find(name);
  if (it == property_closure_.end())
    throw UnknownTerm("undeclared property '" + std::string(name) + "'");
  return it->second;
}

bool Vocabulary::is_subclass_of(std::string_view a, std::string_view b) const {
  const auto& supers = superclasses(a);
  if (!has_class(b)) throw UnknownTerm("undeclared class '" + std::string(b) + "'");
  return std::find(supers.begin(), supers.end(), b) != supers.end();
}

bool Vocabulary::is_subproperty_of(std::string_view p, std::string_view q) const {
  const auto& supers = superproperties(p);
  if (!has_property(q)) throw UnknownTerm("undeclared property '" + std::string(q) + "'");
  return std::find(supers.begin(), supers.end(), q) != supers.end();
}

Vocabulary Vocabulary::build(std::vector<ClassDef> classes, std::vector<PropertyDef> properties) {
  Vocabulary v;
  for (auto& c : classes) {
    if (is_datatype(c.name)) throw FormatError("class '" + c.name + "' shadows a datatype");
    auto name = c.name;
    if (!v.classes_.emplace(name, std::move(c)).second)
      throw FormatError("class '" + name + "' declared twice");
  }
  for (auto& p : properties) {
    auto name = p.name;
    if (!v.properties_.emplace(name, std::move(p)).second)
      throw FormatError("property '" + name + "' declared twice");
  }
  for (const auto& [name, c] : v.classes_) {
    for (const auto& s : c.sub_class_of) {
      if (!v.has_class(s)) throw DanglingReference(name + " subClassOf undeclared '" + s + "'");
    }
  }
  for (const auto& [name, p] : v.properties_) {
    for (const auto& s : p.sub_property_of) {
      if (!v.has_property(s)) throw DanglingReference(name + " subPropertyOf undeclared '" + s + "'");
    }
    for (const auto& d : p.domain_includes) {
      if (!v.has_class(d)) throw DanglingReference(name + " domainIncludes undeclared '" + d + "'");
    }
    for (const auto& r : p.range_includes) {
      if (!v.has_class(r) && !is_datatype(r))
        throw DanglingReference(name + " rangeIncludes undeclared '" + r + "'");
    }
  }
  check_acyclic(v.classes_, &class_parents, "subClassOf");
  check_acyclic(v.properties_, &property_parents, "subPropertyOf");
  for (const auto& [name, _] : v.classes_) v.class_closure_[name] = bfs_closure(v.classes_, name, &class_parents);
  for (const auto& [name, _] : v.properties_)
    v.property_closure_[name] = bfs_closure(v.properties_, name, &property_parents);
  return v;
}

Vocabulary load_vocabulary(std::string_view document) {
  std::vector<ClassDef> classes;
  std::vector<PropertyDef> properties;
  parse_into(document, classes, properties);
  return Vocabulary::build(std::move(classes), std::move(properties));
}

Vocabulary load_vocabulary(const std::vector<std::string>& documents) {
  std::vector<ClassDef> classes;
  std::vector<PropertyDef> properties;
  for (const auto& d : documents) parse_into(d, classes, properties);
  return Vocabulary::build(std::move(classes), std::move(properties));
}

Vocabulary load_vocabulary_paths(const std::vector<std::string>& paths) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p, ec)) {
        if (e.is_regular_file() && e.path().extension() == ".json") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(p);
    }
  }
  if (files.empty()) throw FormatError("no vocabulary files found");
  std::vector<std::string> docs;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw FormatError("cannot read vocabulary file " + f.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    docs.push_back(buf.str());
  }
  return load_vocabulary(docs);
}

bool is_subclass_of(const Vocabulary& v, std::string_view a, std::string_view b) {
  return v.is_subclass_of(a, b);
}

bool is_subproperty_of(const Vocabulary& v, std::string_view p, std::string_view q) {
  return v.is_subproperty_of(p, q);
}

std::optional<SpecKey> parse_spec_key(std::string_view key) {
  for (auto [suffix, input] : {std::pair{std::string_view("-input"), true}, {"-output", false}}) {
    if (key.size() > suffix.size() && key.ends_with(suffix))
      return SpecKey{std::string(key.substr(0, key.size() - suffix.size())), input};
  }
  return std::nullopt;
}

EntityGraph entail_closure(const EntityGraph& g, const Vocabulary& v) { return closure_impl(g, v, true); }

EntityGraph entail_closure_lenient(const EntityGraph& g, const Vocabulary& v) {
  return closure_impl(g, v, false);
}

bool check_property_applicability(const Vocabulary& v, const Node& node, std::string_view property) {
  const auto& def = v.property(property);
  bool typed = false;
  for (const auto& t : node.types) {
    if (!v.has_class(t)) continue;
    typed = true;
    for (const auto& d : def.domain_includes) {
      if (v.is_subclass_of(t, d)) return true;
    }
  }
  return typed && def.domain_includes.empty();
}

bool check_value_admissibility(const Vocabulary& v, const EntityGraph& g, std::string_view property,
                               const Value& value) {
  const auto& def = v.property(property);
  if (const auto* lit = std::get_if<Literal>(&value)) {
    return std::any_of(def.range_includes.begin(), def.range_includes.end(),
                       [&](const std::string& r) { return is_datatype(r) && literal_admits(*lit, r); });
  }
  const auto& node = g.node(std::get<NodeRef>(value));
  for (const auto& t : node.types) {
    if (!v.has_class(t)) continue;
    for (const auto& r : def.range_includes) {
      if (v.has_class(r) && v.is_subclass_of(t, r)) return true;
    }
  }
  return false;
}

std::string_view to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::kUntypedSubject: return "UNTYPED_SUBJECT";
    case ViolationCode::kDomainViolation: return "DOMAIN_VIOLATION";
    case ViolationCode::kRangeViolation: return "RANGE_VIOLATION";
    case ViolationCode::kUnknownProperty: return "UNKNOWN_PROPERTY";
    case ViolationCode::kUnknownType: return "UNKNOWN_TYPE";
    case ViolationCode::kMissingRequired: return "MISSING_REQUIRED";
    case ViolationCode::kConstraintViolation: return "CONSTRAINT_VIOLATION";
    case ViolationCode::kMissingPromised: return "MISSING_PROMISED";
  }
  return "UNKNOWN";
}

std::size_t ValidationReport::count(ViolationCode code) const {
  return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                [code](const Violation& v) { return v.code == code; }));
}

void ValidationReport::append(const ValidationReport& other) {
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

nlohmann::ordered_json ValidationReport::to_json() const {
  auto out = nlohmann::ordered_json::array();
  for (const auto& v : violations) {
    nlohmann::ordered_json j;
    j["code"] = to_string(v.code);
    if (!v.subject.empty()) j["subject"] = v.subject;
    if (!v.property.empty()) j["property"] = v.property;
    if (!v.path.empty()) j["path"] = v.path;
    j["message"] = v.message;
    out.push_back(std::move(j));
  }
  return out;
}

std::string ValidationReport::to_table() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    os << to_string(v.code) << '\t' << (v.subject.empty() ? "-" : v.subject) << '\t'
       << (v.property.empty() ? (v.path.empty() ? "-" : v.path) : v.property) << '\t' << v.message
       << '\n';
  }
  return os.str();
}

ValidationReport validate_graph(const EntityGraph& g, const Vocabulary& v) {
  EntityGraph closed = entail_closure_lenient(g, v);
  ValidationReport report;
  auto order = closed.traversal_order();
  {
    std::vector<bool> seen(closed.size(), false);
    for (auto r : order) seen[r.index] = true;
    for (std::size_t i = 0; i < closed.size(); ++i) {
      if (!seen[i]) order.push_back(NodeRef{i});
    }
  }
  auto add = [&](ViolationCode code, NodeRef ref, std::string property, std::string message) {
    report.violations.push_back({code, ref, subject_label(closed, ref), std::move(property), "", std::move(message)});
  };

  for (auto ref : order) {
    const Node& n = closed.node(ref);
    bool has_known_type = false;
    for (const auto& t : n.types) {
      if (v.has_class(t)) {
        has_known_type = true;
      } else {
        add(ViolationCode::kUnknownType, ref, "", "type '" + t + "' is not declared");
      }
    }
    if (n.types.empty() && !n.properties.empty())
      add(ViolationCode::kUntypedSubject, ref, "", "node carries properties but has no type");

    for (const auto& [key, values] : n.properties) {
      auto spec = parse_spec_key(key);
      const std::string& property = spec ? spec->property : key;
      if (!v.has_property(property)) {
        add(ViolationCode::kUnknownProperty, ref, key, "property '" + property + "' is not declared");
        continue;
      }
      for (const auto& val : values) {
        if (has_known_type && !check_property_applicability(v, n, property)) {
          add(ViolationCode::kDomainViolation, ref, key,
              "subject is not in the domain of '" + property + "'");
        }
        bool admissible = false;
        if (spec) {
          if (const auto* lit = std::get_if<Literal>(&val)) {
            admissible = lit->is_string_like();
          } else {
            const auto& spec_node = closed.node(std::get<NodeRef>(val));
            admissible = spec_node.has_type(kSpecType);
          }
        } else {
          admissible = check_value_admissibility(v, closed, property, val);
        }
        if (!admissible) {
          add(ViolationCode::kRangeViolation, ref, key,
              spec ? "specification value must be a text shorthand or a PropertyValueSpecification"
                   : "value is not in the range of '" + property + "'");
        }
      }
    }
  }
  return report;
}

}  // namespace actions
