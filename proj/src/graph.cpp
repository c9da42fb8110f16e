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

#include "actions/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <set>
#include <unordered_map>

#include "actions/errors.hpp"
#include "actions/text.hpp"

namespace actions {

using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Literal

std::string_view to_string(LiteralKind kind) {
  switch (kind) {
    case LiteralKind::kText: return "text";
    case LiteralKind::kNumber: return "number";
    case LiteralKind::kBoolean: return "boolean";
    case LiteralKind::kDate: return "date";
    case LiteralKind::kDateTime: return "datetime";
    case LiteralKind::kUrl: return "url";
  }
  return "text";
}

std::optional<LiteralKind> literal_kind_from_string(std::string_view name) {
  for (auto k : {LiteralKind::kText, LiteralKind::kNumber, LiteralKind::kBoolean,
                 LiteralKind::kDate, LiteralKind::kDateTime, LiteralKind::kUrl}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Literal Literal::text(std::string s) { return {LiteralKind::kText, std::move(s)}; }

Literal Literal::number(double v) { return from_json(json(v)); }

Literal Literal::integer(std::int64_t v) { return {LiteralKind::kNumber, std::to_string(v)}; }

Literal Literal::boolean(bool v) { return {LiteralKind::kBoolean, v ? "true" : "false"}; }

Literal Literal::date(std::string iso) { return make(LiteralKind::kDate, std::move(iso)); }

Literal Literal::datetime(std::string iso) { return make(LiteralKind::kDateTime, std::move(iso)); }

Literal Literal::url(std::string iri) { return make(LiteralKind::kUrl, std::move(iri)); }

Literal Literal::make(LiteralKind kind, std::string lexical) {
  switch (kind) {
    case LiteralKind::kText:
      return text(std::move(lexical));
    case LiteralKind::kNumber: {
      json j = json::parse(lexical, nullptr, false);
      if (j.is_discarded() || !j.is_number())
        throw SyntaxError("not a number literal: '" + lexical + "'");
      return from_json(j);
    }
    case LiteralKind::kBoolean:
      if (lexical != "true" && lexical != "false")
        throw SyntaxError("not a boolean literal: '" + lexical + "'");
      return {kind, std::move(lexical)};
    case LiteralKind::kDate:
      if (!text::is_iso_date(lexical)) throw SyntaxError("not an ISO date: '" + lexical + "'");
      return {kind, std::move(lexical)};
    case LiteralKind::kDateTime:
      if (!text::is_iso_datetime(lexical))
        throw SyntaxError("not an ISO date-time: '" + lexical + "'");
      return {kind, std::move(lexical)};
    case LiteralKind::kUrl:
      if (!text::is_iri(lexical)) throw SyntaxError("not an IRI: '" + lexical + "'");
      return {kind, std::move(lexical)};
  }
  return text(std::move(lexical));
}

std::optional<double> Literal::as_number() const {
  if (kind == LiteralKind::kBoolean) return std::nullopt;
  json j = json::parse(lexical, nullptr, false);
  if (j.is_discarded() || !j.is_number()) return std::nullopt;
  return j.get<double>();
}

bool Literal::is_integral() const {
  if (kind != LiteralKind::kNumber) return false;
  auto v = as_number();
  return v && std::isfinite(*v) && std::floor(*v) == *v;
}

nlohmann::json Literal::to_json() const {
  switch (kind) {
    case LiteralKind::kNumber: {
      json j = json::parse(lexical, nullptr, false);
      if (!j.is_discarded() && j.is_number()) return j;
      return json(lexical);
    }
    case LiteralKind::kBoolean:
      return json(lexical == "true");
    default:
      return json(lexical);
  }
}

Literal Literal::from_json(const nlohmann::json& j) {
  if (j.is_boolean()) return boolean(j.get<bool>());
  if (j.is_number_integer() || j.is_number_unsigned()) return {LiteralKind::kNumber, j.dump()};
  if (j.is_number_float()) {
    if (!std::isfinite(j.get<double>())) throw SyntaxError("non-finite number");
    return {LiteralKind::kNumber, j.dump()};
  }
  if (j.is_string()) return text(j.get<std::string>());
  throw SyntaxError("not a scalar: " + j.dump());
}

// ---------------------------------------------------------------------------
// Node / Context / EntityGraph

bool Node::has_type(std::string_view t) const {
  return std::find(types.begin(), types.end(), t) != types.end();
}

bool Context::is_default() const { return *this == Context{}; }

NodeRef EntityGraph::add_node(Node node) {
  nodes_.push_back(std::move(node));
  return NodeRef{nodes_.size() - 1};
}

NodeRef EntityGraph::add_root(Node node) {
  auto ref = add_node(std::move(node));
  roots_.push_back(ref);
  return ref;
}

void EntityGraph::add_value(NodeRef subject, const std::string& property, Value v) {
  node(subject).properties[property].push_back(std::move(v));
}

NodeRef EntityGraph::import(const EntityGraph& other, NodeRef root) {
  std::unordered_map<std::size_t, std::size_t> mapping;
  std::vector<NodeRef> order;
  std::vector<NodeRef> stack{root};
  while (!stack.empty()) {
    auto ref = stack.back();
    stack.pop_back();
    if (mapping.count(ref.index)) continue;
    mapping[ref.index] = add_node(Node{other.node(ref).id, other.node(ref).types, {}}).index;
    order.push_back(ref);
    const auto& props = other.node(ref).properties;
    for (auto it = props.rbegin(); it != props.rend(); ++it) {
      for (auto v = it->second.rbegin(); v != it->second.rend(); ++v) {
        if (auto* r = std::get_if<NodeRef>(&*v)) stack.push_back(*r);
      }
    }
  }
  for (auto ref : order) {
    auto& target = nodes_[mapping[ref.index]];
    for (const auto& [name, values] : other.node(ref).properties) {
      auto& out = target.properties[name];
      for (const auto& v : values) {
        if (auto* r = std::get_if<NodeRef>(&v)) {
          out.emplace_back(NodeRef{mapping[r->index]});
        } else {
          out.push_back(v);
        }
      }
    }
  }
  return NodeRef{mapping[root.index]};
}

std::vector<NodeRef> EntityGraph::traversal_order() const {
  std::vector<NodeRef> out;
  std::vector<bool> seen(nodes_.size(), false);
  std::function<void(NodeRef)> visit = [&](NodeRef ref) {
    if (seen[ref.index]) return;
    seen[ref.index] = true;
    out.push_back(ref);
    for (const auto& [_, values] : nodes_[ref.index].properties) {
      for (const auto& v : values) {
        if (auto* r = std::get_if<NodeRef>(&v)) visit(*r);
      }
    }
  };
  for (auto r : roots_) visit(r);
  return out;
}

std::string subject_label(const EntityGraph& g, NodeRef ref) {
  const auto& n = g.node(ref);
  if (n.id) return *n.id;
  return "_:n" + std::to_string(ref.index);
}

// ---------------------------------------------------------------------------
// PropertyPath

namespace {

bool is_type_name(std::string_view name) {
  auto colon = name.find(':');
  auto local = colon == std::string_view::npos ? name : name.substr(colon + 1);
  return !local.empty() && std::isupper(static_cast<unsigned char>(local[0]));
}

}  // namespace

PropertyPath PropertyPath::parse(std::string_view text) {
  PropertyPath p;
  if (text.empty()) throw PathError("empty property path");
  for (auto& part : text::split(text, '.')) {
    if (part.empty()) throw PathError("empty segment in path '" + std::string(text) + "'");
    auto kind = is_type_name(part) ? Segment::Kind::kType : Segment::Kind::kProperty;
    if (kind == Segment::Kind::kType) {
      if (p.segments_.empty())
        throw PathError("path '" + std::string(text) + "' must start with a property");
      if (p.segments_.back().kind == Segment::Kind::kType)
        throw PathError("adjacent type steps in path '" + std::string(text) + "'");
    }
    p.segments_.push_back({kind, std::move(part)});
  }
  return p;
}

std::string PropertyPath::str() const {
  std::string out;
  for (const auto& s : segments_) {
    if (!out.empty()) out += '.';
    out += s.name;
  }
  return out;
}

const std::string& PropertyPath::terminal_property() const {
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
    if (it->kind == Segment::Kind::kProperty) return it->name;
  }
  throw PathError("path has no property step");
}

PropertyPath PropertyPath::without_types() const {
  PropertyPath p;
  for (const auto& s : segments_) {
    if (s.kind == Segment::Kind::kProperty) p.segments_.push_back(s);
  }
  return p;
}

PropertyPath PropertyPath::tail() const {
  PropertyPath p;
  std::size_t skip = segments_.empty() ? 0 : 1;
  if (skip < segments_.size() && segments_[skip].kind == Segment::Kind::kType) ++skip;
  p.segments_.assign(segments_.begin() + static_cast<std::ptrdiff_t>(std::min(skip, segments_.size())),
                     segments_.end());
  return p;
}

PropertyPath PropertyPath::parent() const {
  PropertyPath p = *this;
  if (!p.segments_.empty()) p.segments_.pop_back();
  while (!p.segments_.empty() && p.segments_.back().kind == Segment::Kind::kType)
    p.segments_.pop_back();
  return p;
}

PropertyPath PropertyPath::child(const std::string& property) const {
  PropertyPath p = *this;
  p.segments_.push_back({Segment::Kind::kProperty, property});
  return p;
}

// ---------------------------------------------------------------------------
// parse_graph

namespace {

bool is_schema_iri(std::string_view iri) {
  return iri == "http://schema.org" || iri == "http://schema.org/" ||
         iri == "https://schema.org" || iri == "https://schema.org/";
}

json parse_json_strict(std::string_view document) {
  std::vector<std::set<std::string>> stack;
  json::parser_callback_t cb = [&](int, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        stack.emplace_back();
        break;
      case json::parse_event_t::object_end:
        stack.pop_back();
        break;
      case json::parse_event_t::key: {
        auto key = parsed.get<std::string>();
        if (!stack.back().insert(key).second)
          throw SyntaxError("duplicate key '" + key + "'");
        break;
      }
      default:
        break;
    }
    return true;
  };
  try {
    return json::parse(document.begin(), document.end(), cb);
  } catch (const json::exception& e) {
    throw SyntaxError(e.what());
  }
}

class GraphParser {
 public:
  EntityGraph run(const json& doc) {
    if (doc.is_object()) {
      parse_top(doc);
    } else if (doc.is_array()) {
      for (const auto& el : doc) {
        if (!el.is_object()) throw SyntaxError("top-level array elements must be objects");
        parse_top(el);
      }
    } else {
      throw SyntaxError("document must be a JSON object or array");
    }
    graph_.set_context(ctx_);
    return std::move(graph_);
  }

 private:
  void parse_top(const json& obj) {
    if (auto it = obj.find("@context"); it != obj.end()) apply_context(*it);
    graph_.add_root(parse_node(obj));
  }

  void bind(const std::string& prefix, const std::string& iri) {
    auto [it, inserted] = ctx_.prefixes.emplace(prefix, iri);
    if (!inserted && it->second != iri)
      throw ContextError("prefix '" + prefix + "' bound to two different IRIs");
  }

  void apply_context(const json& c) {
    if (c.is_string()) {
      if (!is_schema_iri(c.get<std::string>()))
        throw UnsupportedFeature("remote @context '" + c.get<std::string>() + "'");
      return;
    }
    if (c.is_array()) {
      for (const auto& el : c) apply_context(el);
      return;
    }
    if (!c.is_object()) throw UnsupportedFeature("@context must be a string, object or array");
    for (const auto& [key, value] : c.items()) {
      if (key == "@vocab") {
        if (!value.is_string() || !is_schema_iri(value.get<std::string>()))
          throw UnsupportedFeature("@vocab other than schema.org");
        continue;
      }
      if (key.starts_with("@")) throw UnsupportedFeature("context keyword " + key);
      if (!value.is_string()) throw UnsupportedFeature("expanded term definition for " + key);
      auto iri = value.get<std::string>();
      if (key == "schema") {
        if (!is_schema_iri(iri)) throw ContextError("prefix 'schema' must denote schema.org");
        continue;
      }
      bind(key, iri);
    }
  }

  std::string resolve(const std::string& term) const {
    for (std::string_view base : {"http://schema.org/", "https://schema.org/"}) {
      if (term.starts_with(base)) return term.substr(base.size());
    }
    for (const auto& [prefix, iri] : ctx_.prefixes) {
      if (term.size() > iri.size() && term.starts_with(iri)) return prefix + ":" + term.substr(iri.size());
    }
    auto colon = term.find(':');
    if (colon == std::string::npos) return term;
    auto prefix = term.substr(0, colon);
    if (prefix == "schema") return term.substr(colon + 1);
    if (ctx_.prefixes.count(prefix)) return term;
    if (term.compare(colon, 3, "://") == 0) return term;
    throw ContextError("unknown prefix '" + prefix + "' in term '" + term + "'");
  }

  static bool is_reference(const json& obj) {
    if (!obj.contains("@id")) return false;
    for (const auto& [key, _] : obj.items()) {
      if (key != "@id" && key != "@context") return false;
    }
    return true;
  }

  NodeRef node_for_id(const std::string& id) {
    if (auto it = by_id_.find(id); it != by_id_.end()) return it->second;
    auto ref = graph_.add_node(Node{id, {}, {}});
    by_id_.emplace(id, ref);
    return ref;
  }

  NodeRef parse_node(const json& obj) {
    std::optional<std::string> id;
    if (auto it = obj.find("@id"); it != obj.end()) {
      if (!it->is_string()) throw SyntaxError("@id must be a string");
      id = it->get<std::string>();
    }
    if (is_reference(obj)) return node_for_id(*id);
    NodeRef ref = id ? node_for_id(*id) : graph_.add_node(Node{});

    for (const auto& [key, value] : obj.items()) {
      if (key == "@id" || key == "@context") continue;
      if (key == "@type") {
        std::vector<std::string> names;
        if (value.is_string()) {
          names.push_back(value.get<std::string>());
        } else if (value.is_array()) {
          for (const auto& t : value) {
            if (!t.is_string()) throw SyntaxError("@type entries must be strings");
            names.push_back(t.get<std::string>());
          }
        } else {
          throw SyntaxError("@type must be a string or an array of strings");
        }
        for (const auto& n : names) {
          auto t = resolve(n);
          if (!graph_.node(ref).has_type(t)) graph_.node(ref).types.push_back(t);
        }
        continue;
      }
      if (key.starts_with("@")) throw UnsupportedFeature("keyword " + key);
      auto property = resolve(key);
      std::vector<Value> values;
      if (value.is_array()) {
        for (const auto& el : value) {
          if (el.is_array()) throw UnsupportedFeature("nested arrays (lists)");
          if (!el.is_null()) values.push_back(parse_value(el));
        }
      } else if (!value.is_null()) {
        values.push_back(parse_value(value));
      }
      if (values.empty()) continue;
      auto& slot = graph_.node(ref).properties[property];
      slot.insert(slot.end(), values.begin(), values.end());
    }
    return ref;
  }

  Value parse_value(const json& v) {
    if (v.is_object()) {
      if (v.contains("@context")) throw UnsupportedFeature("nested @context");
      return parse_node(v);
    }
    return Literal::from_json(v);
  }

  EntityGraph graph_;
  Context ctx_;
  std::unordered_map<std::string, NodeRef> by_id_;
};

}  // namespace

EntityGraph parse_graph(std::string_view document) {
  return GraphParser{}.run(parse_json_strict(document));
}

// ---------------------------------------------------------------------------
// serialize_graph

namespace {

class GraphWriter {
 public:
  explicit GraphWriter(const EntityGraph& g) : g_(g), emitted_(g.size(), false) {
    std::vector<int> refs(g.size(), 0);
    for (auto r : g.roots()) ++refs[r.index];
    for (auto ref : g.traversal_order()) {
      for (const auto& [_, values] : g.node(ref).properties) {
        for (const auto& v : values) {
          if (auto* r = std::get_if<NodeRef>(&v)) ++refs[r->index];
        }
      }
    }
    int next = 0;
    labels_.resize(g.size());
    for (auto ref : g.traversal_order()) {
      const auto& n = g.node(ref);
      if (!n.is_blank()) {
        labels_[ref.index] = *n.id;
      } else if (refs[ref.index] > 1) {
        labels_[ref.index] = "_:b" + std::to_string(next++);
      }
    }
  }

  ordered_json roots() {
    ordered_json out = ordered_json::array();
    for (auto r : g_.roots()) out.push_back(node(r, true));
    return out;
  }

 private:
  ordered_json context() const {
    const auto& ctx = g_.context();
    if (ctx.is_default()) return "http://schema.org";
    ordered_json c = ordered_json::object();
    c["@vocab"] = ctx.vocab;
    for (const auto& [prefix, iri] : ctx.prefixes) c[prefix] = iri;
    return c;
  }

  ordered_json node(NodeRef ref, bool top) {
    ordered_json out = ordered_json::object();
    if (top) out["@context"] = context();
    const auto& label = labels_[ref.index];
    if (emitted_[ref.index]) {
      out["@id"] = label;
      return out;
    }
    emitted_[ref.index] = true;
    const auto& n = g_.node(ref);
    if (!label.empty()) out["@id"] = label;
    if (n.types.size() == 1) {
      out["@type"] = n.types.front();
    } else if (n.types.size() > 1) {
      out["@type"] = n.types;
    }
    for (const auto& [name, values] : n.properties) {
      if (values.empty()) continue;
      if (values.size() == 1) {
        out[name] = value(values.front());
      } else {
        ordered_json arr = ordered_json::array();
        for (const auto& v : values) arr.push_back(value(v));
        out[name] = std::move(arr);
      }
    }
    return out;
  }

  ordered_json value(const Value& v) {
    if (auto* r = std::get_if<NodeRef>(&v)) return node(*r, false);
    return ordered_json(std::get<Literal>(v).to_json());
  }

  const EntityGraph& g_;
  std::vector<bool> emitted_;
  std::vector<std::string> labels_;
};

}  // namespace

nlohmann::ordered_json graph_to_json(const EntityGraph& g) { return GraphWriter(g).roots(); }

std::string serialize_graph(const EntityGraph& g, int indent) {
  auto roots = graph_to_json(g);
  if (roots.size() == 1) return roots.front().dump(indent);
  return roots.dump(indent);
}

// ---------------------------------------------------------------------------
// Paths

std::vector<Value> get_path(const EntityGraph& g, NodeRef root, const PropertyPath& path) {
  std::vector<Value> current{root};
  for (const auto& seg : path.segments()) {
    std::vector<Value> next;
    for (const auto& v : current) {
      const auto* ref = std::get_if<NodeRef>(&v);
      if (!ref) continue;
      const auto& n = g.node(*ref);
      if (seg.kind == PropertyPath::Segment::Kind::kType) {
        if (n.has_type(seg.name)) next.push_back(v);
      } else if (auto it = n.properties.find(seg.name); it != n.properties.end()) {
        next.insert(next.end(), it->second.begin(), it->second.end());
      }
    }
    current = std::move(next);
  }
  return current;
}

void set_path_in_place(EntityGraph& g, NodeRef root, const PropertyPath& path, const Value& v) {
  using Kind = PropertyPath::Segment::Kind;
  const auto& segs = path.segments();
  if (segs.empty() || segs.back().kind != Kind::kProperty)
    throw PathError("set_path needs a path ending in a property: '" + path.str() + "'");
  NodeRef cur = root;
  std::size_t i = 0;
  while (i + 1 < segs.size()) {
    const auto& prop = segs[i].name;
    std::optional<std::string> type;
    if (segs[i + 1].kind == Kind::kType) type = segs[i + 1].name;

    std::optional<NodeRef> chosen;
    bool literal_only = false;
    {
      const auto& props = g.node(cur).properties;
      if (auto it = props.find(prop); it != props.end()) {
        for (const auto& val : it->second) {
          const auto* r = std::get_if<NodeRef>(&val);
          if (!r) continue;
          if (!type || g.node(*r).has_type(*type)) {
            chosen = *r;
            break;
          }
          if (!chosen) chosen = *r;
        }
        literal_only = !chosen && !it->second.empty();
      }
    }
    if (literal_only)
      throw PathConflict("property '" + prop + "' holds a literal in the middle of '" + path.str() + "'");
    if (!chosen) {
      Node fresh;
      if (type) fresh.types.push_back(*type);
      chosen = g.add_node(std::move(fresh));
      g.add_value(cur, prop, *chosen);
    } else if (type && !g.node(*chosen).has_type(*type)) {
      g.node(*chosen).types.push_back(*type);
    }
    cur = *chosen;
    i += type ? 2 : 1;
  }
  if (const auto* r = std::get_if<NodeRef>(&v); r && r->index >= g.size())
    throw PathError("value references a node outside the graph");
  g.add_value(cur, segs.back().name, v);
}

EntityGraph set_path(const EntityGraph& g, NodeRef root, const PropertyPath& path, const Value& v) {
  EntityGraph out = g;
  set_path_in_place(out, root, path, v);
  return out;
}

}  // namespace actions
