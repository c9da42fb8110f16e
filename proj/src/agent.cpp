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

#include "actions/agent.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

#include "actions/errors.hpp"
#include "actions/text.hpp"
#include "httplib.h"

namespace actions {

using nlohmann::ordered_json;

namespace {

constexpr std::size_t kMenuSize = 3;

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string action_verb(const ActionDescriptor& d) {
  auto name = extract_intent(d).name;
  return name.substr(0, name.find('.'));
}

void say(FlowSession& s, std::string event, std::string text) {
  s.transcript.push_back({"agent", std::move(event), std::move(text)});
}

void prompt_next(FlowSession& s) {
  if (!s.pending_slots.empty()) say(s, "prompt", "Please tell me your " + s.pending_slots.front().label + ".");
}

// Defaults in the skeleton are replaced by whatever the user supplied.
void rebuild_filled(FlowSession& s) {
  ActionDescriptor d = *s.current_action;
  for (const auto& [path, lit] : s.values) {
    for (auto& spec : d.inputs) {
      if (spec.path == path) spec.default_value = lit;
    }
  }
  s.filled = request_skeleton(d);
}

void enter_action(FlowSession& s, const ActionDescriptor& d) {
  s.current_action = d;
  s.values.clear();
  s.choices.clear();
  s.pending_slots.clear();
  s.last_error.reset();
  for (const auto& spec : d.inputs) {
    if (spec.value_required && !spec.default_value)
      s.pending_slots.push_back({spec.path, spec.datatype, text::humanize(spec.path.terminal_property()), spec});
  }
  rebuild_filled(s);
  s.state = s.pending_slots.empty() ? FlowState::kReadyToInvoke : FlowState::kEliciting;
  prompt_next(s);
}

std::map<std::string, std::string> template_vars(const FlowSession& s) {
  std::map<std::string, std::string> vars;
  const auto& d = *s.current_action;
  if (s.filled.roots().empty()) return vars;
  for (const auto& spec : d.inputs) {
    if (!spec.value_name) continue;
    for (const auto& v : get_path(s.filled, s.filled.roots().front(), spec.path)) {
      if (const auto* l = std::get_if<Literal>(&v)) {
        vars.emplace(*spec.value_name, l->lexical);
        break;
      }
    }
  }
  return vars;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

ordered_json constraints_json(const PropertyValueSpecification& s) {
  ordered_json c = ordered_json::object();
  c["valueRequired"] = s.value_required;
  if (s.value_name) c["valueName"] = *s.value_name;
  if (s.default_value) c["defaultValue"] = s.default_value->to_json();
  if (s.min_value) c["minValue"] = *s.min_value;
  if (s.max_value) c["maxValue"] = *s.max_value;
  if (s.value_min_length) c["valueMinLength"] = *s.value_min_length;
  if (s.value_max_length) c["valueMaxLength"] = *s.value_max_length;
  if (s.value_pattern) c["valuePattern"] = *s.value_pattern;
  if (s.multiple_values) c["multipleValues"] = true;
  return c;
}

ordered_json action_json(const ActionDescriptor& d) {
  return graph_to_json(serialize_action(d)).at(0);
}

}  // namespace

std::string_view to_string(FlowState s) {
  switch (s) {
    case FlowState::kDiscovering: return "Discovering";
    case FlowState::kEliciting: return "Eliciting";
    case FlowState::kReadyToInvoke: return "ReadyToInvoke";
    case FlowState::kPresenting: return "Presenting";
    case FlowState::kCompleted: return "Completed";
    case FlowState::kFailed: return "Failed";
  }
  return "Failed";
}

namespace {

template <typename Call>
HttpResult http_call(const std::string& url, std::chrono::milliseconds timeout, Call&& call) {
  auto parts = text::split_url(url);
  if (!parts) return {0, "", "not an absolute URL: " + url};
  if (parts->origin.starts_with("https:")) return {0, "", "https is not supported: " + url};
  httplib::Client cli(parts->origin);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  std::string target = parts->path.empty() ? "/" : parts->path;
  if (!parts->query.empty()) target += "?" + parts->query;
  auto res = call(cli, target);
  if (!res) return {0, "", "cannot reach " + parts->origin + ": " + httplib::to_string(res.error())};
  return {res->status, res->body, ""};
}

}  // namespace

HttpResult HttpTransport::get(const std::string& url) {
  return http_call(url, timeout_, [&](httplib::Client& cli, const std::string& target) {
    httplib::Headers h;
    if (authorization_) h.emplace("Authorization", *authorization_);
    return cli.Get(target, h);
  });
}

HttpResult HttpTransport::post(const std::string& url, const std::string& body, const std::string& content_type) {
  return http_call(url, timeout_, [&](httplib::Client& cli, const std::string& target) {
    httplib::Headers h;
    if (authorization_) h.emplace("Authorization", *authorization_);
    return cli.Post(target, h, body, content_type);
  });
}

Discovery discover_actions(Transport& t, const std::string& entry_url, const Vocabulary& v) {
  std::string url = entry_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  if (!url.ends_with("/actions")) url += "/actions";
  auto res = t.get(url);
  if (res.status == 0) throw TransportError(res.error);
  if (res.status != 200) throw TransportError("GET " + url + " returned HTTP " + std::to_string(res.status));

  Discovery out;
  auto doc = nlohmann::json::parse(res.body, nullptr, false);
  if (doc.is_discarded()) throw TransportError("entry document at " + url + " is not JSON");
  if (!doc.is_array()) doc = nlohmann::json::array({doc});
  for (std::size_t i = 0; i < doc.size(); ++i) {
    try {
      auto g = parse_graph(doc[i].dump());
      for (auto root : g.roots()) out.actions.push_back(parse_action(g, root, v));
    } catch (const Error& e) {
      out.diagnostics.push_back("entry " + std::to_string(i) + ": " + e.kind() + ": " + e.what());
    }
  }
  if (out.actions.empty()) out.diagnostics.push_back("entry document lists no actions");
  return out;
}

FlowSession new_session(std::string id, std::vector<ActionDescriptor> entry_actions) {
  FlowSession s;
  s.id = std::move(id);
  s.entry_actions = std::move(entry_actions);
  std::vector<std::string> names;
  for (const auto& d : s.entry_actions) names.push_back(extract_intent(d).name);
  say(s, "discover", names.empty() ? "No actions are available." : "Available: " + join(names, ", ") + ".");
  return s;
}

FlowSession start_session(const ActionDescriptor& d, std::string id) {
  FlowSession s;
  s.id = std::move(id);
  say(s, "start", capability_summary(extract_intent(d)));
  enter_action(s, d);
  return s;
}

Literal coerce_slot_value(const PropertyValueSpecification& spec, std::string_view raw_in) {
  std::string raw = trim(raw_in);
  auto fail = [&](const std::string& what) -> Literal {
    throw CoercionError("'" + raw + "' is not " + what + " (" + spec.path.str() + ")");
  };
  Literal lit;
  const auto& type = spec.datatype;
  if (type == "Date") {
    auto iso = text::normalize_date(raw);
    lit = iso ? Literal::date(*iso) : fail("a date");
  } else if (type == "DateTime") {
    lit = text::is_iso_datetime(raw) ? Literal::datetime(raw) : fail("a date-time");
  } else if (type == "Integer") {
    std::int64_t n = 0;
    auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), n);
    lit = (ec == std::errc() && p == raw.data() + raw.size() && !raw.empty()) ? Literal::integer(n) : fail("an integer");
  } else if (type == "Number") {
    char* end = nullptr;
    double n = raw.empty() ? 0 : std::strtod(raw.c_str(), &end);
    lit = (!raw.empty() && end == raw.c_str() + raw.size()) ? Literal::number(n) : fail("a number");
  } else if (type == "Boolean") {
    auto low = text::to_lower(raw);
    if (low == "true" || low == "yes") {
      lit = Literal::boolean(true);
    } else if (low == "false" || low == "no") {
      lit = Literal::boolean(false);
    } else {
      fail("yes or no");
    }
  } else if (type == "URL") {
    lit = text::is_iri(raw) ? Literal::url(raw) : fail("a URL");
  } else {
    lit = raw.empty() && spec.value_required ? fail("a value") : Literal::text(raw);
  }
  if (auto problems = check_value_constraints(spec, lit); !problems.empty())
    throw ConstraintError(join(problems, "; "));
  return lit;
}

FlowSession fill_slot(FlowSession s, const PropertyPath& path_in, std::string_view raw) {
  if (s.state != FlowState::kEliciting && s.state != FlowState::kReadyToInvoke)
    throw StateError(std::string("cannot fill a slot while ") + std::string(to_string(s.state)));
  PropertyPath path = path_in.without_types();
  const auto* spec = s.current_action->find_input(path);
  if (!spec) throw PathError("'" + path.str() + "' is not an input of the current action");

  s.transcript.push_back({"user", "fill", path.str() + " = " + std::string(raw)});
  Literal lit;
  try {
    lit = coerce_slot_value(*spec, raw);
  } catch (const Error& e) {
    s.last_error = e.kind() + ": " + e.what();
    say(s, "rejected", e.what());
    return s;
  }
  s.last_error.reset();
  std::erase_if(s.values, [&](const auto& v) { return v.first == path; });
  s.values.emplace_back(path, lit);
  std::erase_if(s.pending_slots, [&](const SlotPrompt& p) { return p.path == path; });
  rebuild_filled(s);
  s.state = s.pending_slots.empty() ? FlowState::kReadyToInvoke : FlowState::kEliciting;
  prompt_next(s);
  return s;
}

FlowSession invoke_current(FlowSession s, Transport& t, const Vocabulary& v) {
  if (s.state != FlowState::kReadyToInvoke)
    throw StateError(std::string("cannot invoke while ") + std::string(to_string(s.state)));
  const ActionDescriptor& d = *s.current_action;
  s.transcript.push_back({"user", "invoke", extract_intent(d).name});

  auto local = validate_request_inputs(d, s.filled, v);
  if (!local.empty()) {
    s.last_violations = local.to_json();
    s.last_error = "request does not satisfy its specifications";
    s.state = FlowState::kFailed;
    say(s, "failed", *s.last_error);
    return s;
  }

  std::string url = d.entry_point.expand(template_vars(s));
  HttpResult res = d.entry_point.http_method == "GET"
                       ? t.get(url)
                       : t.post(url, serialize_graph(s.filled), "application/ld+json");
  s.last_status = res.status;
  if (res.status == 0) {
    s.last_error = "TransportError: " + res.error;
    s.state = FlowState::kFailed;
    say(s, "failed", res.error);
    return s;
  }

  auto body = nlohmann::json::parse(res.body, nullptr, false);
  nlohmann::json graph_json = body;
  s.last_violations = ordered_json::array();
  if (body.is_object() && body.contains("response")) {
    graph_json = body["response"];
    if (auto it = body.find("violations"); it != body.end() && it->is_array())
      s.last_violations = ordered_json::parse(it->dump());
  }
  if (res.status < 200 || res.status >= 300 || body.is_discarded()) {
    s.state = FlowState::kFailed;
    std::string why = "HTTP " + std::to_string(res.status);
    if (!s.last_violations.empty()) why += ", " + s.last_violations.at(0).value("message", std::string());
    s.last_error = why;
    say(s, "failed", why);
    return s;
  }

  try {
    s.last_result = parse_graph(graph_json.dump());
  } catch (const Error& e) {
    s.last_error = e.kind() + ": " + e.what();
    s.state = FlowState::kFailed;
    say(s, "failed", *s.last_error);
    return s;
  }
  s.last_error.reset();
  s.choices.clear();
  s.pending_slots.clear();
  const EntityGraph& result = *s.last_result;
  for (auto root : result.roots()) {
    auto it = result.node(root).properties.find("potentialAction");
    if (it == result.node(root).properties.end()) continue;
    for (const auto& pa : it->second) {
      const auto* ref = std::get_if<NodeRef>(&pa);
      if (!ref) continue;
      try {
        s.choices.push_back({root, describe_root(result, root), parse_action(result, *ref, v)});
      } catch (const Error& e) {
        say(s, "diagnostic", std::string("ignored a potential action: ") + e.what());
      }
    }
  }

  if (s.choices.empty()) {
    s.state = FlowState::kCompleted;
    std::string verb = action_verb(d);
    if (!verb.empty()) verb[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(verb[0])));
    std::string text = verb + " action completed.";
    for (auto root : result.roots()) {
      for (const auto& val : get_path(result, root, PropertyPath::parse("confirmationNumber"))) {
        if (const auto* l = std::get_if<Literal>(&val)) text += " Confirmation: " + l->lexical + ".";
      }
    }
    say(s, "completed", text);
    return s;
  }
  s.state = FlowState::kPresenting;
  std::string text = "I found " + std::to_string(result.roots().size()) + " item" +
                     (result.roots().size() == 1 ? "" : "s") + ".";
  std::vector<std::string> shown;
  for (std::size_t i = 0; i < s.choices.size() && i < kMenuSize; ++i)
    shown.push_back(std::to_string(i + 1) + ". " + s.choices[i].label);
  text += (s.choices.size() > kMenuSize ? " The first " + std::to_string(kMenuSize) + " are: " : " They are: ") +
          join(shown, ", ") + ".";
  say(s, "result", text);
  return s;
}

FlowSession choose(FlowSession s, std::size_t index) {
  if (s.state == FlowState::kDiscovering) {
    if (index >= s.entry_actions.size())
      throw IndexOutOfRange("choice " + std::to_string(index) + " of " + std::to_string(s.entry_actions.size()));
    s.transcript.push_back({"user", "choose", extract_intent(s.entry_actions[index]).name});
    say(s, "start", capability_summary(extract_intent(s.entry_actions[index])));
    enter_action(s, s.entry_actions[index]);
    return s;
  }
  if (s.state != FlowState::kPresenting)
    throw StateError(std::string("cannot choose while ") + std::string(to_string(s.state)));
  if (index >= s.choices.size())
    throw IndexOutOfRange("choice " + std::to_string(index) + " of " + std::to_string(s.choices.size()));
  Choice c = s.choices[index];
  s.transcript.push_back({"user", "choose", std::to_string(index + 1) + ". " + c.label});
  enter_action(s, c.action);
  return s;
}

std::optional<std::size_t> match_intent(const std::vector<ActionDescriptor>& actions, std::string_view query) {
  std::string q = text::to_lower(trim(query));
  std::optional<std::size_t> prefix;
  std::size_t prefix_hits = 0;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    auto name = extract_intent(actions[i]).name;
    if (name == q) return i;
    if (!q.empty() && name.starts_with(q)) {
      prefix = i;
      ++prefix_hits;
    }
  }
  return prefix_hits == 1 ? prefix : std::nullopt;
}

std::string capability_summary(const IntentDescriptor& intent) {
  auto dot = intent.name.find('.');
  std::string verb = intent.name.substr(0, dot);
  std::string out = "You can " + verb + " " + (dot == std::string::npos ? "" : intent.name.substr(dot + 1));
  std::vector<std::string> labels;
  for (const auto& s : intent.required_slots) labels.push_back(s.prompt_name);
  if (!labels.empty()) out += " given " + join(labels, ", ");
  return out + ".";
}

std::string describe_root(const EntityGraph& g, NodeRef root) {
  for (const char* p : {"name", "itemOffered.name", "confirmationNumber"}) {
    for (const auto& v : get_path(g, root, PropertyPath::parse(p))) {
      if (const auto* l = std::get_if<Literal>(&v)) return l->lexical;
    }
  }
  const auto& types = g.node(root).types;
  return types.empty() ? subject_label(g, root) : types.front();
}

ordered_json session_to_json(const FlowSession& s) {
  ordered_json j;
  j["id"] = s.id;
  j["state"] = std::string(to_string(s.state));
  auto entries = ordered_json::array();
  for (std::size_t i = 0; i < s.entry_actions.size(); ++i) {
    const auto& d = s.entry_actions[i];
    auto intent = extract_intent(d);
    entries.push_back({{"index", i}, {"id", d.id}, {"intent", intent.name},
                       {"summary", capability_summary(intent)}, {"requiredSlots", intent.required_slots.size()}});
  }
  j["entryActions"] = entries;
  if (s.current_action) {
    j["intent"] = extract_intent(*s.current_action).name;
    j["currentAction"] = action_json(*s.current_action);
  } else {
    j["intent"] = nullptr;
    j["currentAction"] = nullptr;
  }
  auto slots = ordered_json::array();
  for (const auto& p : s.pending_slots) {
    slots.push_back({{"path", p.path.str()}, {"label", p.label}, {"datatype", p.datatype},
                     {"constraints", constraints_json(p.spec)}});
  }
  j["pendingSlots"] = slots;
  j["filled"] = s.current_action ? graph_to_json(s.filled) : ordered_json::array();
  j["lastResult"] = s.last_result ? graph_to_json(*s.last_result) : ordered_json(nullptr);
  auto choices = ordered_json::array();
  for (std::size_t i = 0; i < s.choices.size(); ++i) {
    choices.push_back({{"index", i}, {"label", s.choices[i].label}, {"root", s.choices[i].root.index},
                       {"intent", extract_intent(s.choices[i].action).name}});
  }
  j["choices"] = choices;
  j["lastStatus"] = s.last_status;
  j["lastError"] = s.last_error ? ordered_json(*s.last_error) : ordered_json(nullptr);
  j["violations"] = s.last_violations;
  return j;
}

std::string transcript_jsonl(const FlowSession& s) {
  std::string out;
  for (const auto& e : s.transcript) {
    ordered_json line;
    line["speaker"] = e.speaker;
    line["event"] = e.event;
    line["text"] = e.text;
    out += line.dump() + "\n";
  }
  return out;
}

}  // namespace actions
