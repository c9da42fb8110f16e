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

#include "actions/action.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>

#include "actions/errors.hpp"
#include "actions/text.hpp"

namespace actions {

namespace {

constexpr std::string_view kMethods[] = {"GET", "POST", "PUT", "PATCH", "DELETE"};
constexpr std::string_view kTokenAuth = "webapi:TokenAuthentication";
constexpr std::string_view kBasicAuth = "webapi:HTTPBasicAuthentication";
constexpr std::string_view kCustomAuth = "webapi:CustomAuthentication";
constexpr std::string_view kAuthenticateAction = "webapi:AuthenticateAction";

std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

bool node_is_a(const Vocabulary& v, const Node& n, std::string_view type) {
  for (const auto& t : n.types) {
    if (t == type) return true;
    if (v.has_class(t) && v.has_class(type) && v.is_subclass_of(t, type)) return true;
  }
  return false;
}

const Literal* first_literal(const Node& n, const std::string& property) {
  auto it = n.properties.find(property);
  if (it == n.properties.end()) return nullptr;
  for (const auto& v : it->second) {
    if (const auto* l = std::get_if<Literal>(&v)) return l;
  }
  return nullptr;
}

std::optional<NodeRef> first_node(const Node& n, const std::string& property) {
  auto it = n.properties.find(property);
  if (it == n.properties.end()) return std::nullopt;
  for (const auto& v : it->second) {
    if (const auto* r = std::get_if<NodeRef>(&v)) return *r;
  }
  return std::nullopt;
}

std::optional<std::string> text_of(const Node& n, const std::string& property) {
  if (const auto* l = first_literal(n, property)) return l->lexical;
  return std::nullopt;
}

std::string strip_prefix(const std::string& name) {
  auto colon = name.find(':');
  return colon == std::string::npos ? name : name.substr(colon + 1);
}

std::string resolve_datatype(const Vocabulary& v, const std::string& property) {
  if (!v.has_property(property)) return "Text";
  const auto& range = v.property(property).range_includes;
  for (const auto& r : range) {
    if (is_datatype(r)) return r;
  }
  return range.front();
}

double number_or_throw(const Literal& l, const std::string& what) {
  auto n = l.as_number();
  if (!n) throw MalformedSpec(what + " must be a number, got '" + l.lexical + "'");
  return *n;
}

std::int64_t length_or_throw(const Literal& l, const std::string& what) {
  auto n = l.as_number();
  if (!n || *n < 0 || static_cast<double>(static_cast<std::int64_t>(*n)) != *n)
    throw MalformedSpec(what + " must be a non-negative integer, got '" + l.lexical + "'");
  return static_cast<std::int64_t>(*n);
}

bool bool_or_throw(const Literal& l, const std::string& what) {
  if (l.lexical == "true") return true;
  if (l.lexical == "false") return false;
  throw MalformedSpec(what + " must be a boolean, got '" + l.lexical + "'");
}

void check_pattern(const std::string& pattern) {
  try {
    std::regex re(pattern, std::regex::ECMAScript);
  } catch (const std::regex_error&) {
    throw MalformedSpec("valuePattern '" + pattern + "' is not a valid regular expression");
  }
}

void check_bounds(const PropertyValueSpecification& s) {
  if (s.min_value && s.max_value && *s.min_value > *s.max_value)
    throw MalformedSpec("minValue exceeds maxValue for '" + s.path.str() + "'");
  if (s.value_min_length && s.value_max_length && *s.value_min_length > *s.value_max_length)
    throw MalformedSpec("valueMinLength exceeds valueMaxLength for '" + s.path.str() + "'");
}

// "required name=q maxlength=100" style shorthand.
void apply_shorthand(PropertyValueSpecification& s, const std::string& text) {
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    auto eq = token.find('=');
    auto key = token.substr(0, eq);
    auto val = eq == std::string::npos ? std::string() : token.substr(eq + 1);
    auto need_value = [&] {
      if (eq == std::string::npos || val.empty())
        throw MalformedSpec("shorthand '" + key + "' needs a value in '" + text + "'");
    };
    if (key == "required" && eq == std::string::npos) {
      s.value_required = true;
    } else if (key == "multiple" && eq == std::string::npos) {
      s.multiple_values = true;
    } else if (key == "name") {
      need_value();
      s.value_name = val;
    } else if (key == "min" || key == "max") {
      need_value();
      double n = number_or_throw(Literal::text(val), key);
      (key == "min" ? s.min_value : s.max_value) = n;
    } else if (key == "minlength" || key == "maxlength") {
      need_value();
      auto n = length_or_throw(Literal::text(val), key);
      (key == "minlength" ? s.value_min_length : s.value_max_length) = n;
    } else if (key == "pattern") {
      need_value();
      check_pattern(val);
      s.value_pattern = val;
    } else if (key == "default") {
      need_value();
      s.default_value = Literal::text(val);
    } else {
      throw MalformedSpec("unknown specification shorthand '" + token + "'");
    }
  }
}

PropertyValueSpecification parse_spec(const EntityGraph& g, const Value& value, PropertyPath path,
                                      SpecDirection direction, const Vocabulary& v) {
  PropertyValueSpecification s;
  s.path = std::move(path);
  s.direction = direction;
  s.datatype = resolve_datatype(v, s.path.terminal_property());
  if (const auto* lit = std::get_if<Literal>(&value)) {
    if (!lit->is_string_like()) throw MalformedSpec("specification for '" + s.path.str() + "' must be text or an object");
    apply_shorthand(s, lit->lexical);
  } else {
    const Node& n = g.node(std::get<NodeRef>(value));
    for (const auto& [key, vals] : n.properties) {
      if (vals.size() != 1 || !std::holds_alternative<Literal>(vals.front()))
        throw MalformedSpec("'" + key + "' of specification '" + s.path.str() + "' must be a single literal");
      const auto& l = std::get<Literal>(vals.front());
      if (key == "valueRequired") {
        s.value_required = bool_or_throw(l, key);
      } else if (key == "valueName") {
        s.value_name = l.lexical;
      } else if (key == "defaultValue") {
        s.default_value = l;
      } else if (key == "minValue") {
        s.min_value = number_or_throw(l, key);
      } else if (key == "maxValue") {
        s.max_value = number_or_throw(l, key);
      } else if (key == "valueMinLength") {
        s.value_min_length = length_or_throw(l, key);
      } else if (key == "valueMaxLength") {
        s.value_max_length = length_or_throw(l, key);
      } else if (key == "valuePattern") {
        check_pattern(l.lexical);
        s.value_pattern = l.lexical;
      } else if (key == "multipleValues") {
        s.multiple_values = bool_or_throw(l, key);
      } else if (key == "readonlyValue" || key == "name" || key == "description") {
        // informational
      } else {
        throw MalformedSpec("unknown specification property '" + key + "'");
      }
    }
  }
  check_bounds(s);
  if (direction == SpecDirection::kOutput &&
      (s.value_name || s.default_value || s.min_value || s.max_value || s.value_min_length ||
       s.value_max_length || s.value_pattern || s.multiple_values))
    throw MalformedSpec("output specification '" + s.path.str() + "' may only declare valueRequired");
  return s;
}

class ActionReader {
 public:
  ActionReader(const EntityGraph& g, const Vocabulary& v, ActionDescriptor& d) : g_(g), v_(v), d_(d) {}

  void walk(NodeRef ref, const PropertyPath& prefix) {
    if (!visiting_.insert(ref.index).second) return;
    const Node& n = g_.node(ref);
    for (const auto& [key, values] : n.properties) {
      if (auto spec = parse_spec_key(key)) {
        if (values.size() != 1) throw MalformedSpec("'" + key + "' must hold exactly one specification");
        auto dir = spec->input ? SpecDirection::kInput : SpecDirection::kOutput;
        add(parse_spec(g_, values.front(), prefix.child(spec->property), dir, v_));
        continue;
      }
      if (key == "potentialAction") continue;
      if (prefix.empty() && (key == "target" || key == "instrument" || key == "error")) continue;
      for (const auto& val : values) {
        const auto* child = std::get_if<NodeRef>(&val);
        if (!child) continue;
        auto path = prefix.child(key);
        record_types(path.str(), g_.node(*child).types);
        walk(*child, path);
      }
    }
    visiting_.erase(ref.index);
  }

 private:
  void record_types(const std::string& prefix, const std::vector<std::string>& types) {
    if (!seen_prefixes_.insert(prefix).second || types.empty()) return;
    if (prefix == "object") {
      d_.object_types = types;
    } else if (prefix == "result") {
      d_.result_types = types;
    } else {
      d_.nested_types[prefix] = types;
    }
  }

  void add(PropertyValueSpecification s) {
    auto& list = s.direction == SpecDirection::kInput ? d_.inputs : d_.outputs;
    for (const auto& existing : list) {
      if (existing.path == s.path) throw ConflictingSpecs("duplicate specification for '" + s.path.str() + "'");
    }
    list.push_back(std::move(s));
  }

  const EntityGraph& g_;
  const Vocabulary& v_;
  ActionDescriptor& d_;
  std::set<std::size_t> visiting_;
  std::set<std::string> seen_prefixes_;
};

AuthenticationSpec read_auth(const EntityGraph& g, const Node& action, const Vocabulary& v) {
  AuthenticationSpec a;
  auto it = action.properties.find("instrument");
  if (it == action.properties.end()) return a;
  for (const auto& val : it->second) {
    const auto* ref = std::get_if<NodeRef>(&val);
    if (!ref) continue;
    const Node& n = g.node(*ref);
    if (node_is_a(v, n, kTokenAuth)) {
      a.method = AuthMethod::kToken;
      a.token = text_of(n, "webapi:bearerToken").value_or("");
    } else if (node_is_a(v, n, kBasicAuth)) {
      a.method = AuthMethod::kBasic;
      a.token = text_of(n, "webapi:basicToken").value_or("");
    } else if (node_is_a(v, n, kCustomAuth)) {
      a.method = AuthMethod::kCustom;
      auto name = text_of(n, "name");
      auto value = text_of(n, "value");
      auto placement = text_of(n, "webapi:placement");
      if (!name || !value || !placement)
        throw MalformedSpec("custom authentication needs name, value and webapi:placement");
      a.name = *name;
      a.value = *value;
      if (*placement == "header") {
        a.placement = AuthPlacement::kHeader;
      } else if (*placement == "body") {
        a.placement = AuthPlacement::kBody;
      } else if (*placement == "url") {
        a.placement = AuthPlacement::kUrl;
      } else {
        throw MalformedSpec("unknown authentication placement '" + *placement + "'");
      }
    } else {
      continue;
    }
    if (auto pa = n.properties.find("potentialAction"); pa != n.properties.end()) {
      for (const auto& p : pa->second) {
        const auto* r = std::get_if<NodeRef>(&p);
        if (r && g.node(*r).id && node_is_a(v, g.node(*r), kAuthenticateAction))
          a.authenticate_actions.push_back(*g.node(*r).id);
      }
    }
    break;
  }
  return a;
}

// Finds (or creates) the node at a property-only prefix, typing newly
// created nodes from the descriptor.
NodeRef ensure_node(EntityGraph& g, NodeRef root, const PropertyPath& prefix, const ActionDescriptor& d) {
  NodeRef cur = root;
  PropertyPath walked;
  for (const auto& seg : prefix.segments()) {
    walked = walked.child(seg.name);
    auto existing = first_node(g.node(cur), seg.name);
    if (existing) {
      cur = *existing;
      continue;
    }
    auto next = g.add_node(Node{std::nullopt, d.types_at(walked.str()), {}});
    g.add_value(cur, seg.name, next);
    cur = next;
  }
  return cur;
}

NodeRef spec_node(EntityGraph& g, const PropertyValueSpecification& s) {
  Node n;
  n.types.push_back("PropertyValueSpecification");
  auto put = [&](const char* key, Literal l) { n.properties[key].push_back(std::move(l)); };
  put("valueRequired", Literal::boolean(s.value_required));
  if (s.value_name) put("valueName", Literal::text(*s.value_name));
  if (s.default_value) put("defaultValue", *s.default_value);
  if (s.min_value) put("minValue", Literal::number(*s.min_value));
  if (s.max_value) put("maxValue", Literal::number(*s.max_value));
  if (s.value_min_length) put("valueMinLength", Literal::integer(*s.value_min_length));
  if (s.value_max_length) put("valueMaxLength", Literal::integer(*s.value_max_length));
  if (s.value_pattern) put("valuePattern", Literal::text(*s.value_pattern));
  if (s.multiple_values) put("multipleValues", Literal::boolean(true));
  return g.add_node(std::move(n));
}

}  // namespace

bool is_http_method(std::string_view method) {
  return std::find(std::begin(kMethods), std::end(kMethods), method) != std::end(kMethods);
}

std::vector<std::string> EntryPoint::placeholders() const {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = url_template.find('{', pos)) != std::string::npos) {
    auto end = url_template.find('}', pos);
    if (end == std::string::npos) break;
    auto expr = url_template.substr(pos + 1, end - pos - 1);
    if (!expr.empty() && std::string_view("+#./;?&").find(expr[0]) != std::string_view::npos)
      expr.erase(0, 1);
    for (auto& var : text::split(expr, ',')) {
      auto cut = var.find_first_of(":*");
      if (cut != std::string::npos) var.erase(cut);
      if (!var.empty()) out.push_back(var);
    }
    pos = end + 1;
  }
  return out;
}

std::string EntryPoint::expand(const std::map<std::string, std::string>& vars) const {
  std::string out;
  std::size_t pos = 0;
  while (pos < url_template.size()) {
    auto open = url_template.find('{', pos);
    auto close = open == std::string::npos ? std::string::npos : url_template.find('}', open);
    if (close == std::string::npos) {
      out += url_template.substr(pos);
      break;
    }
    out += url_template.substr(pos, open - pos);
    std::string expr = url_template.substr(open + 1, close - open - 1);
    char op = !expr.empty() && (expr[0] == '?' || expr[0] == '&') ? expr[0] : '\0';
    if (op) expr.erase(0, 1);
    bool first = true;
    for (const auto& name : text::split(expr, ',')) {
      auto it = vars.find(name);
      if (it == vars.end()) continue;
      if (op) {
        out += first ? op : '&';
        out += text::percent_encode(name) + "=";
      }
      out += text::percent_encode(it->second);
      first = false;
    }
    pos = close + 1;
  }
  return out;
}

std::string_view to_string(AuthMethod m) {
  switch (m) {
    case AuthMethod::kNone: return "none";
    case AuthMethod::kToken: return "token";
    case AuthMethod::kBasic: return "basic";
    case AuthMethod::kCustom: return "custom";
  }
  return "none";
}

std::string_view to_string(AuthPlacement p) {
  switch (p) {
    case AuthPlacement::kHeader: return "header";
    case AuthPlacement::kBody: return "body";
    case AuthPlacement::kUrl: return "url";
  }
  return "header";
}

std::vector<std::string> check_value_constraints(const PropertyValueSpecification& spec, const Value& value) {
  std::vector<std::string> problems;
  const auto* lit = std::get_if<Literal>(&value);
  bool has_literal_constraints = spec.min_value || spec.max_value || spec.value_min_length ||
                                 spec.value_max_length || spec.value_pattern;
  if (!lit) {
    if (has_literal_constraints) problems.push_back("expected a literal value");
    return problems;
  }
  if (spec.min_value || spec.max_value) {
    auto n = lit->as_number();
    if (!n) {
      problems.push_back("'" + lit->lexical + "' is not numeric");
    } else {
      std::ostringstream os;
      if (spec.min_value && *n < *spec.min_value) {
        os << lit->lexical << " is below minValue " << *spec.min_value;
        problems.push_back(os.str());
      }
      if (spec.max_value && *n > *spec.max_value) {
        os.str("");
        os << lit->lexical << " is above maxValue " << *spec.max_value;
        problems.push_back(os.str());
      }
    }
  }
  auto len = static_cast<std::int64_t>(utf8_length(lit->lexical));
  if (spec.value_min_length && len < *spec.value_min_length)
    problems.push_back("shorter than valueMinLength " + std::to_string(*spec.value_min_length));
  if (spec.value_max_length && len > *spec.value_max_length)
    problems.push_back("longer than valueMaxLength " + std::to_string(*spec.value_max_length));
  if (spec.value_pattern && !std::regex_match(lit->lexical, std::regex(*spec.value_pattern, std::regex::ECMAScript)))
    problems.push_back("'" + lit->lexical + "' does not match valuePattern " + *spec.value_pattern);
  return problems;
}

const PropertyValueSpecification* ActionDescriptor::find_input(const PropertyPath& path) const {
  for (const auto& s : inputs) {
    if (s.path == path) return &s;
  }
  return nullptr;
}

std::vector<std::string> ActionDescriptor::types_at(const std::string& prefix) const {
  if (prefix == "object") return object_types;
  if (prefix == "result") return result_types;
  if (auto it = nested_types.find(prefix); it != nested_types.end()) return it->second;
  return {};
}

ActionDescriptor parse_action(const EntityGraph& g, NodeRef root, const Vocabulary& v) {
  const Node& n = g.node(root);
  ActionDescriptor d;
  d.id = n.id.value_or("");
  for (const auto& t : n.types) {
    if (v.has_class(t) && v.has_class("Action") && v.is_subclass_of(t, "Action")) {
      d.action_type = t;
      break;
    }
  }
  if (d.action_type.empty()) throw NotAnAction("node " + subject_label(g, root) + " is not typed with an Action");

  auto target = n.properties.find("target");
  if (target == n.properties.end() || target->second.empty())
    throw MissingTarget("action " + subject_label(g, root) + " has no target entry point");
  const Value& tv = target->second.front();
  if (const auto* lit = std::get_if<Literal>(&tv)) {
    d.entry_point.url_template = lit->lexical;
  } else {
    const Node& ep = g.node(std::get<NodeRef>(tv));
    auto url = text_of(ep, "urlTemplate");
    if (!url) throw MissingTarget("entry point of " + subject_label(g, root) + " has no urlTemplate");
    d.entry_point.url_template = *url;
    if (auto m = text_of(ep, "httpMethod")) {
      std::string upper = *m;
      std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
      if (!is_http_method(upper)) throw MalformedSpec("unsupported httpMethod '" + *m + "'");
      d.entry_point.http_method = upper;
    }
    d.entry_point.encoding_type = text_of(ep, "encodingType").value_or("");
    d.entry_point.content_type = text_of(ep, "contentType").value_or("");
  }

  ActionReader(g, v, d).walk(root, PropertyPath{});
  d.auth = read_auth(g, n, v);
  if (auto err = first_node(n, "error")) {
    const auto& types = g.node(*err).types;
    if (!types.empty()) d.error_type = types.front();
  }

  for (const auto& name : d.entry_point.placeholders()) {
    bool declared = std::any_of(d.inputs.begin(), d.inputs.end(),
                                [&](const PropertyValueSpecification& s) { return s.value_name == name; });
    if (!declared)
      throw MalformedSpec("urlTemplate placeholder {" + name + "} has no input with that valueName");
  }
  return d;
}

EntityGraph serialize_action(const ActionDescriptor& d) {
  EntityGraph g;
  Node root;
  if (!d.id.empty()) root.id = d.id;
  root.types.push_back(d.action_type);
  NodeRef r = g.add_root(std::move(root));

  Node ep;
  ep.types.push_back("EntryPoint");
  ep.properties["urlTemplate"].push_back(Literal::text(d.entry_point.url_template));
  ep.properties["httpMethod"].push_back(Literal::text(d.entry_point.http_method));
  if (!d.entry_point.encoding_type.empty())
    ep.properties["encodingType"].push_back(Literal::text(d.entry_point.encoding_type));
  if (!d.entry_point.content_type.empty())
    ep.properties["contentType"].push_back(Literal::text(d.entry_point.content_type));
  g.add_value(r, "target", g.add_node(std::move(ep)));

  if (!d.object_types.empty()) ensure_node(g, r, PropertyPath::parse("object"), d);
  if (!d.result_types.empty()) ensure_node(g, r, PropertyPath::parse("result"), d);
  for (const auto& [prefix, _] : d.nested_types) ensure_node(g, r, PropertyPath::parse(prefix), d);

  for (const auto* list : {&d.inputs, &d.outputs}) {
    for (const auto& s : *list) {
      NodeRef owner = ensure_node(g, r, s.path.parent(), d);
      auto key = s.path.terminal_property() + (s.direction == SpecDirection::kInput ? "-input" : "-output");
      g.add_value(owner, key, spec_node(g, s));
    }
  }

  if (d.auth.method != AuthMethod::kNone) {
    Node a;
    switch (d.auth.method) {
      case AuthMethod::kToken:
        a.types.emplace_back(kTokenAuth);
        if (!d.auth.token.empty()) a.properties["webapi:bearerToken"].push_back(Literal::text(d.auth.token));
        break;
      case AuthMethod::kBasic:
        a.types.emplace_back(kBasicAuth);
        if (!d.auth.token.empty()) a.properties["webapi:basicToken"].push_back(Literal::text(d.auth.token));
        break;
      default:
        a.types.emplace_back(kCustomAuth);
        a.properties["name"].push_back(Literal::text(d.auth.name));
        a.properties["value"].push_back(Literal::text(d.auth.value));
        a.properties["webapi:placement"].push_back(Literal::text(std::string(to_string(d.auth.placement))));
        break;
    }
    NodeRef auth = g.add_node(std::move(a));
    for (const auto& id : d.auth.authenticate_actions) {
      g.add_value(auth, "potentialAction", g.add_node(Node{id, {std::string(kAuthenticateAction)}, {}}));
    }
    g.add_value(r, "instrument", auth);
  }
  if (d.error_type != "Thing") g.add_value(r, "error", g.add_node(Node{std::nullopt, {d.error_type}, {}}));
  return g;
}

EntityGraph request_skeleton(const ActionDescriptor& d) {
  EntityGraph g;
  NodeRef r = g.add_root(Node{std::nullopt, {d.action_type}, {}});
  if (!d.object_types.empty()) ensure_node(g, r, PropertyPath::parse("object"), d);
  for (const auto& s : d.inputs) ensure_node(g, r, s.path.parent(), d);
  for (const auto& s : d.inputs) {
    if (s.default_value) set_path_in_place(g, r, s.path, *s.default_value);
  }
  return g;
}

ValidationReport validate_request_inputs(const ActionDescriptor& d, const EntityGraph& filled,
                                         const Vocabulary& v) {
  ValidationReport report;
  auto add = [&](ViolationCode code, std::optional<NodeRef> node, const PropertyValueSpecification* s,
                 std::string message) {
    report.violations.push_back({code, node, node ? subject_label(filled, *node) : "",
                                 s ? s->path.terminal_property() : "", s ? s->path.str() : "",
                                 std::move(message)});
  };
  if (filled.roots().empty()) {
    add(ViolationCode::kConstraintViolation, std::nullopt, nullptr, "request has no root node");
    return report;
  }
  EntityGraph closed = entail_closure_lenient(filled, v);
  NodeRef root = closed.roots().front();
  if (!closed.node(root).has_type(d.action_type))
    add(ViolationCode::kConstraintViolation, root, nullptr, "request root is not a " + d.action_type);

  for (const auto& s : d.inputs) {
    auto values = get_path(closed, root, s.path);
    if (s.value_required && values.empty())
      add(ViolationCode::kMissingRequired, root, &s, "required input '" + s.path.str() + "' is missing");
    if (!s.multiple_values && values.size() > 1)
      add(ViolationCode::kConstraintViolation, root, &s, "'" + s.path.str() + "' accepts a single value");
    for (const auto& val : values) {
      for (auto& problem : check_value_constraints(s, val))
        add(ViolationCode::kConstraintViolation, root, &s, "'" + s.path.str() + "': " + problem);
    }
  }
  report.append(validate_graph(filled, v));
  return report;
}

ValidationReport validate_response_outputs(const ActionDescriptor& d, const EntityGraph& response,
                                           const Vocabulary& v) {
  ValidationReport report;
  std::vector<const PropertyValueSpecification*> promised;
  for (const auto& s : d.outputs) {
    if (s.value_required && !s.path.segments().empty() && s.path.segments().front().name == "result")
      promised.push_back(&s);
  }
  if (response.roots().empty()) {
    for (const auto* s : promised) {
      report.violations.push_back({ViolationCode::kMissingPromised, std::nullopt, "", s->path.terminal_property(),
                                   s->path.str(), "response is empty; '" + s->path.str() + "' was promised"});
    }
    return report;
  }
  EntityGraph closed = entail_closure_lenient(response, v);
  for (auto root : closed.roots()) {
    for (const auto* s : promised) {
      auto rel = s->path.tail();
      if (rel.empty() || !get_path(closed, root, rel).empty()) continue;
      report.violations.push_back({ViolationCode::kMissingPromised, root, subject_label(closed, root),
                                   s->path.terminal_property(), s->path.str(),
                                   "promised output '" + s->path.str() + "' is absent"});
    }
  }
  return report;
}

IntentDescriptor extract_intent(const ActionDescriptor& d) {
  std::string verb = strip_prefix(d.action_type);
  if (verb.size() >= 6 && verb.ends_with("Action")) verb.resize(verb.size() - 6);
  if (verb.empty()) verb = "act";
  std::string object = d.object_types.empty() ? "thing" : strip_prefix(d.object_types.front());

  IntentDescriptor intent;
  intent.name = text::to_lower(verb) + "." + text::to_lower(object);
  intent.action_id = d.id;
  for (const auto& s : d.inputs) {
    Slot slot{s.path, text::humanize(s.path.terminal_property()), s.datatype};
    (s.value_required ? intent.required_slots : intent.optional_slots).push_back(std::move(slot));
  }
  return intent;
}

}  // namespace actions
