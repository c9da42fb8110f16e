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

#include "actions/mapping.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "actions/text.hpp"

namespace actions {

using nlohmann::json;

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

BindingLocation location_from(const std::string& s) {
  if (s == "query") return BindingLocation::kQuery;
  if (s == "path") return BindingLocation::kPath;
  if (s == "body") return BindingLocation::kBody;
  if (s == "header") return BindingLocation::kHeader;
  throw FormatError("unknown binding location '" + s + "'");
}

Transform transform_from(const std::string& s) {
  if (s == "identity") return Transform::kIdentity;
  if (s == "date-to-iso") return Transform::kDateToIso;
  if (s == "number-to-text") return Transform::kNumberToText;
  if (s == "boolean-negate") return Transform::kBooleanNegate;
  if (s == "price-to-free-flag") return Transform::kPriceToFreeFlag;
  throw FormatError("unknown transform '" + s + "'");
}

// "rooms[*].id" -> {"rooms", "id"}; nullopt when there is no wildcard.
std::optional<std::pair<std::string, std::string>> split_wildcard(std::string_view path) {
  auto pos = path.find("[*]");
  if (pos == std::string_view::npos) return std::nullopt;
  std::string prefix(path.substr(0, pos));
  std::string_view rest = path.substr(pos + 3);
  if (rest.starts_with(".")) rest.remove_prefix(1);
  return std::make_pair(prefix, std::string(rest));
}

PropertyPath path_field(const json& j, const char* key) {
  try {
    return PropertyPath::parse(j.at(key).get<std::string>());
  } catch (const PathError& e) {
    throw FormatError(std::string(key) + ": " + e.what());
  }
}

std::vector<std::string> string_list(const json& j, const char* key) {
  std::vector<std::string> out;
  if (auto it = j.find(key); it != j.end()) {
    if (it->is_string()) return {it->get<std::string>()};
    for (const auto& s : *it) out.push_back(s.get<std::string>());
  }
  return out;
}

ResourceMapping read_resource(const json& r, const Vocabulary& v) {
  ResourceMapping rm;
  rm.resource_id = r.at("resourceId").get<std::string>();
  if (rm.resource_id.empty()) throw FormatError("empty resourceId");

  try {
    EntityGraph g = parse_graph(r.at("descriptor").dump());
    if (g.roots().size() != 1) throw DescriptorInvalid("descriptor must have exactly one root");
    rm.descriptor = parse_action(g, g.roots().front(), v);
    auto report = validate_graph(g, v);
    if (!report.empty())
      throw DescriptorInvalid(report.violations.front().message + " (" +
                              std::to_string(report.violations.size()) + " violation(s))");
  } catch (const DescriptorInvalid& e) {
    throw DescriptorInvalid("resource '" + rm.resource_id + "': " + e.what());
  } catch (const Error& e) {
    throw DescriptorInvalid("resource '" + rm.resource_id + "': " + e.kind() + ": " + e.what());
  }

  rm.native_method = r.value("nativeMethod", std::string("GET"));
  if (!is_http_method(rm.native_method)) throw FormatError("unsupported nativeMethod '" + rm.native_method + "'");
  rm.native_path_template = r.value("nativePathTemplate", std::string());

  for (const auto& b : r.value("inputBindings", json::array())) {
    InputBinding ib;
    ib.spec_path = path_field(b, "specPath");
    ib.location = location_from(b.value("location", std::string("query")));
    ib.native_name = b.at("nativeName").get<std::string>();
    ib.transform = transform_from(b.value("transform", std::string("identity")));
    if (!rm.descriptor.find_input(ib.spec_path.without_types()))
      throw FormatError("resource '" + rm.resource_id + "': binding '" + ib.spec_path.str() +
                        "' matches no input specification");
    rm.input_bindings.push_back(std::move(ib));
  }

  EntryPoint native;
  native.url_template = rm.native_path_template;
  for (const auto& name : native.placeholders()) {
    bool bound = std::any_of(rm.input_bindings.begin(), rm.input_bindings.end(), [&](const InputBinding& b) {
      return b.location == BindingLocation::kPath && b.native_name == name;
    });
    if (!bound) throw FormatError("path placeholder {" + name + "} has no path binding");
  }

  std::optional<std::string> array_prefix;
  for (const auto& b : r.value("outputBindings", json::array())) {
    OutputBinding ob;
    ob.native_path = b.at("nativePath").get<std::string>();
    ob.schema_path = path_field(b, "schemaPath");
    auto kind = b.value("literalKind", std::string("text"));
    auto lk = literal_kind_from_string(kind);
    if (!lk) throw FormatError("unknown literalKind '" + kind + "'");
    ob.literal_kind = *lk;
    if (auto first = ob.native_path.find("[*]"); first != std::string::npos) {
      if (ob.native_path.find("[*]", first + 1) != std::string::npos)
        throw FormatError("more than one [*] in '" + ob.native_path + "'");
      auto prefix = split_wildcard(ob.native_path)->first;
      if (array_prefix && *array_prefix != prefix)
        throw FormatError("output bindings iterate over different arrays");
      array_prefix = prefix;
    }
    rm.output_bindings.push_back(std::move(ob));
  }

  rm.result_types = string_list(r, "resultTypes");
  if (rm.result_types.empty()) rm.result_types = rm.descriptor.result_types;

  for (const auto& a : r.value("responseActions", json::array())) {
    ResponseAction ra;
    ra.action_ref = a.at("actionRef").get<std::string>();
    if (auto c = a.find("condition"); c != a.end() && !c->is_null()) {
      ResponseCondition cond;
      if (c->contains("nodeType")) cond.node_type = c->at("nodeType").get<std::string>();
      if (auto fe = c->find("fieldEquals"); fe != c->end()) {
        if (!fe->is_object() || fe->size() != 1) throw FormatError("fieldEquals needs exactly one field");
        cond.field_equals = std::make_pair(fe->begin().key(), fe->begin().value());
      }
      ra.condition = std::move(cond);
    }
    for (const auto& f : a.value("bindFields", json::array())) {
      ra.bind_fields.push_back({f.at("fromNativePath").get<std::string>(), path_field(f, "toSpecDefaultPath")});
    }
    rm.response_actions.push_back(std::move(ra));
  }
  return rm;
}

std::optional<Literal> native_literal(const json& j, LiteralKind kind) {
  if (j.is_null() || j.is_object() || j.is_array()) return std::nullopt;
  try {
    switch (kind) {
      case LiteralKind::kNumber:
        if (j.is_number()) return Literal::from_json(j);
        if (j.is_string()) return Literal::make(kind, j.get<std::string>());
        break;
      case LiteralKind::kBoolean:
        if (j.is_boolean()) return Literal::boolean(j.get<bool>());
        if (j.is_string()) return Literal::make(kind, j.get<std::string>());
        break;
      case LiteralKind::kText:
        return Literal::text(j.is_string() ? j.get<std::string>() : j.dump());
      default:
        if (j.is_string()) return Literal::make(kind, j.get<std::string>());
        break;
    }
  } catch (const SyntaxError&) {
  }
  throw NativeParseError("native value " + j.dump() + " is not a valid " + std::string(to_string(kind)));
}

std::string error_text(std::string_view body, int status) {
  json j = json::parse(body, nullptr, false);
  if (!j.is_discarded()) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_object()) {
      for (const char* key : {"error", "message", "description"}) {
        if (auto it = j.find(key); it != j.end() && it->is_string()) return it->get<std::string>();
      }
    }
  }
  std::string s(body);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s.empty() ? "HTTP " + std::to_string(status) : s;
}

void set_body_field(json& body, const std::string& dotted, json value) {
  json* cur = &body;
  auto parts = text::split(dotted, '.');
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    json& next = (*cur)[parts[i]];
    if (!next.is_object()) next = json::object();
    cur = &next;
  }
  (*cur)[parts.back()] = std::move(value);
}

std::string substitute(std::string tmpl, const std::string& name, const std::string& value) {
  std::string key = "{" + name + "}";
  for (auto pos = tmpl.find(key); pos != std::string::npos; pos = tmpl.find(key, pos + value.size()))
    tmpl.replace(pos, key.size(), value);
  return tmpl;
}

std::string join_url(std::string base, const std::string& path) {
  while (!base.empty() && base.back() == '/') base.pop_back();
  if (!path.empty() && path.front() != '/') return base + "/" + path;
  return base + path;
}

}  // namespace

ValidationFailed::ValidationFailed(ValidationReport report)
    : Error("ValidationFailed", "request violates " + std::to_string(report.violations.size()) +
                                    " input specification(s)"),
      report_(std::move(report)) {}

std::string_view to_string(BindingLocation l) {
  switch (l) {
    case BindingLocation::kQuery: return "query";
    case BindingLocation::kPath: return "path";
    case BindingLocation::kBody: return "body";
    case BindingLocation::kHeader: return "header";
  }
  return "query";
}

std::string_view to_string(Transform t) {
  switch (t) {
    case Transform::kIdentity: return "identity";
    case Transform::kDateToIso: return "date-to-iso";
    case Transform::kNumberToText: return "number-to-text";
    case Transform::kBooleanNegate: return "boolean-negate";
    case Transform::kPriceToFreeFlag: return "price-to-free-flag";
  }
  return "identity";
}

Literal apply_transform(Transform t, const Literal& in) {
  switch (t) {
    case Transform::kIdentity:
      return in;
    case Transform::kDateToIso:
      if (auto iso = text::normalize_date(in.lexical)) return Literal::text(*iso);
      return in;
    case Transform::kNumberToText:
      return Literal::text(in.lexical);
    case Transform::kBooleanNegate:
      if (in.lexical == "true") return Literal::boolean(false);
      if (in.lexical == "false") return Literal::boolean(true);
      return in;
    case Transform::kPriceToFreeFlag:
      // isAccessibleForFree=true <-> native price filter "free".
      if (in.lexical == "true") return Literal::text("free");
      if (in.lexical == "false") return Literal::text("paid");
      return in;
  }
  return in;
}

std::optional<std::string> NativeRequest::header(std::string_view name) const {
  for (const auto& [k, v] : headers) {
    if (iequals(k, name)) return v;
  }
  return std::nullopt;
}

void NativeRequest::set_header(const std::string& name, const std::string& value) {
  std::erase_if(headers, [&](const auto& h) { return iequals(h.first, name); });
  headers.emplace_back(name, value);
}

const ResourceMapping* MappingDocument::find(std::string_view resource_id) const {
  for (const auto& r : resources) {
    if (r.resource_id == resource_id) return &r;
  }
  return nullptr;
}

const ResourceMapping& MappingDocument::at(std::string_view resource_id) const {
  if (const auto* r = find(resource_id)) return *r;
  throw FormatError("unknown resource '" + std::string(resource_id) + "'");
}

bool MappingDocument::is_published(std::string_view resource_id) const {
  for (const auto& r : resources) {
    for (const auto& a : r.response_actions) {
      if (a.action_ref == resource_id) return false;
    }
  }
  return find(resource_id) != nullptr;
}

MappingDocument MappingDocument::with_entry_base(const std::string& base) const {
  MappingDocument out = *this;
  for (auto& r : out.resources) {
    r.descriptor.entry_point = EntryPoint{join_url(base, "/invoke/" + r.resource_id), "POST", "application/ld+json",
                                          "application/ld+json"};
  }
  return out;
}

MappingDocument MappingDocument::with_backend(const std::string& base_url) const {
  MappingDocument out = *this;
  out.backend_base_url = base_url;
  return out;
}

MappingDocument load_mapping(std::string_view document, std::shared_ptr<const Vocabulary> v) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("mapping is not JSON: ") + e.what());
  }
  MappingDocument m;
  m.vocab_ = std::move(v);
  try {
    if (!j.is_object()) throw FormatError("mapping must be a JSON object");
    m.id = j.value("id", std::string());
    m.backend_base_url = j.at("backendBaseUrl").get<std::string>();
    if (!text::split_url(m.backend_base_url)) throw FormatError("backendBaseUrl must be an absolute URL");
    std::set<std::string> ids;
    for (const auto& r : j.value("resources", json::array())) {
      auto rm = read_resource(r, *m.vocab_);
      if (!ids.insert(rm.resource_id).second) throw FormatError("duplicate resourceId '" + rm.resource_id + "'");
      m.resources.push_back(std::move(rm));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("mapping: ") + e.what());
  }
  for (const auto& r : m.resources) {
    for (const auto& a : r.response_actions) {
      const auto* target = m.find(a.action_ref);
      if (!target) throw UnresolvedActionRef("'" + r.resource_id + "' refers to unknown action '" + a.action_ref + "'");
      for (const auto& f : a.bind_fields) {
        if (!target->descriptor.find_input(f.to_spec_default_path))
          throw FormatError("bindFields target '" + f.to_spec_default_path.str() + "' is not an input of '" +
                            a.action_ref + "'");
      }
    }
  }
  return m;
}

NativeRequest ground_request(const MappingDocument& m, std::string_view resource_id, const EntityGraph& filled,
                             const AuthenticationSpec& auth) {
  const auto& r = m.at(resource_id);
  const Vocabulary& v = m.vocabulary();
  auto report = validate_request_inputs(r.descriptor, filled, v);
  if (!report.empty()) throw ValidationFailed(std::move(report));

  EntityGraph closed = entail_closure_lenient(filled, v);
  NodeRef root = closed.roots().front();

  NativeRequest req;
  req.method = r.native_method;
  std::string path = r.native_path_template;
  text::QueryParams query;
  json body = json::object();
  bool has_body = false;
  std::vector<std::pair<std::string, std::string>> headers;

  for (const auto& b : r.input_bindings) {
    std::vector<Literal> values;
    for (const auto& val : get_path(closed, root, b.spec_path)) {
      if (const auto* l = std::get_if<Literal>(&val)) values.push_back(apply_transform(b.transform, *l));
    }
    switch (b.location) {
      case BindingLocation::kQuery:
        for (const auto& l : values) query.emplace_back(b.native_name, l.lexical);
        break;
      case BindingLocation::kPath:
        if (values.empty()) throw MissingPathValue("no value for path placeholder {" + b.native_name + "}");
        path = substitute(path, b.native_name, text::percent_encode(values.front().lexical));
        break;
      case BindingLocation::kBody:
        has_body = true;
        if (values.size() == 1) {
          set_body_field(body, b.native_name, values.front().to_json());
        } else if (values.size() > 1) {
          json arr = json::array();
          for (const auto& l : values) arr.push_back(l.to_json());
          set_body_field(body, b.native_name, std::move(arr));
        }
        break;
      case BindingLocation::kHeader:
        if (!values.empty()) headers.emplace_back(b.native_name, values.front().lexical);
        break;
    }
  }
  EntryPoint substituted;
  substituted.url_template = path;
  if (auto left = substituted.placeholders(); !left.empty())
    throw MissingPathValue("no value for path placeholder {" + left.front() + "}");

  const auto& enc = r.descriptor.entry_point.encoding_type;
  if (!enc.empty() && req.method != "GET" && req.method != "DELETE") has_body = true;

  req.url = join_url(m.backend_base_url, path);
  if (auto q = text::canonical_query(std::move(query)); !q.empty()) req.url += "?" + q;
  if (has_body) {
    req.headers.emplace_back("Content-Type", "application/json");
    req.body = body.dump();
  }
  for (auto& h : headers) req.headers.push_back(std::move(h));
  return build_auth_header(auth, std::move(req));
}

NativeRequest build_auth_header(const AuthenticationSpec& a, NativeRequest req) {
  switch (a.method) {
    case AuthMethod::kNone:
      return req;
    case AuthMethod::kToken:
    case AuthMethod::kBasic:
      if (a.token.empty()) throw MissingCredentials("no token configured for " + std::string(to_string(a.method)) +
                                                    " authentication");
      req.set_header("Authorization", (a.method == AuthMethod::kToken ? "Bearer " : "Basic ") + a.token);
      return req;
    case AuthMethod::kCustom:
      break;
  }
  if (a.name.empty() || a.value.empty()) throw MissingCredentials("custom authentication needs name and value");
  switch (a.placement) {
    case AuthPlacement::kHeader:
      req.set_header(a.name, a.value);
      break;
    case AuthPlacement::kBody: {
      json body = req.body ? json::parse(*req.body, nullptr, false) : json::object();
      if (!body.is_object()) throw MissingCredentials("cannot place a credential in a non-object body");
      body[a.name] = a.value;
      req.body = body.dump();
      if (!req.header("Content-Type")) req.headers.emplace_back("Content-Type", "application/json");
      break;
    }
    case AuthPlacement::kUrl: {
      auto q = req.url.find('?');
      std::string base = req.url.substr(0, q);
      auto params = q == std::string::npos ? text::QueryParams{} : text::parse_query(req.url.substr(q + 1));
      std::erase_if(params, [&](const auto& p) { return p.first == a.name; });
      params.emplace_back(a.name, a.value);
      req.url = base + "?" + text::canonical_query(std::move(params));
      break;
    }
  }
  return req;
}

const json* native_lookup(const json& doc, std::string_view path) {
  const json* cur = &doc;
  if (path.empty()) return cur;
  for (const auto& key : text::split(path, '.')) {
    if (!cur->is_object()) return nullptr;
    auto it = cur->find(key);
    if (it == cur->end()) return nullptr;
    cur = &*it;
  }
  return cur;
}

EntityGraph lift_response(const MappingDocument& m, std::string_view resource_id, std::string_view native_body,
                          int native_status) {
  const auto& r = m.at(resource_id);
  EntityGraph g;
  if (native_status < 200 || native_status >= 300) {
    NodeRef root = g.add_root(Node{std::nullopt, {r.descriptor.error_type}, {}});
    g.add_value(root, "description", Literal::text(error_text(native_body, native_status)));
    return g;
  }
  NativeOrigin origin;
  try {
    origin.document = json::parse(native_body);
  } catch (const json::parse_error& e) {
    throw NativeParseError(std::string("native response is not JSON: ") + e.what());
  }

  std::optional<std::string> array_prefix;
  for (const auto& b : r.output_bindings) {
    if (auto w = split_wildcard(b.native_path)) array_prefix = w->first;
  }
  if (array_prefix) {
    const json* arr = native_lookup(origin.document, *array_prefix);
    if (arr && arr->is_array()) origin.elements.assign(arr->begin(), arr->end());
  } else {
    origin.elements.push_back(origin.document);
  }

  for (const auto& element : origin.elements) {
    NodeRef root = g.add_root(Node{std::nullopt, r.result_types, {}});
    for (const auto& b : r.output_bindings) {
      const json* src = nullptr;
      if (auto w = split_wildcard(b.native_path)) {
        src = native_lookup(element, w->second);
      } else {
        src = native_lookup(origin.document, b.native_path);
      }
      if (!src) continue;
      std::vector<const json*> items;
      if (src->is_array()) {
        for (const auto& it : *src) items.push_back(&it);
      } else {
        items.push_back(src);
      }
      for (const auto* item : items) {
        if (auto lit = native_literal(*item, b.literal_kind)) set_path_in_place(g, root, b.schema_path, *lit);
      }
    }
  }
  return attach_potential_actions(m, resource_id, g, origin);
}

EntityGraph attach_potential_actions(const MappingDocument& m, std::string_view resource_id,
                                     const EntityGraph& lifted, const NativeOrigin& origin) {
  const auto& r = m.at(resource_id);
  if (r.response_actions.empty()) return lifted;
  EntityGraph out = lifted;
  EntityGraph closed = entail_closure_lenient(lifted, m.vocabulary());
  const json null_element;
  auto roots = lifted.roots();
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const json& element = i < origin.elements.size() ? origin.elements[i] : null_element;
    for (const auto& ra : r.response_actions) {
      if (ra.condition) {
        const auto& c = *ra.condition;
        if (c.node_type && !closed.node(roots[i]).has_type(*c.node_type)) continue;
        if (c.field_equals) {
          const json* f = native_lookup(element, c.field_equals->first);
          if (!f || *f != c.field_equals->second) continue;
        }
      }
      ActionDescriptor d = m.at(ra.action_ref).descriptor;
      d.id.clear();  // one blank node per instance; a shared @id would merge them
      for (const auto& bf : ra.bind_fields) {
        const json* src = bf.from_native_path.starts_with("$.")
                              ? native_lookup(origin.document, std::string_view(bf.from_native_path).substr(2))
                              : native_lookup(element, bf.from_native_path);
        if (!src || src->is_null() || src->is_object() || src->is_array()) continue;
        for (auto& spec : d.inputs) {
          if (spec.path == bf.to_spec_default_path) spec.default_value = Literal::from_json(*src);
        }
      }
      EntityGraph pa = serialize_action(d);
      NodeRef copy = out.import(pa, pa.roots().front());
      out.add_value(roots[i], "potentialAction", copy);
    }
  }
  return out;
}

}  // namespace actions
