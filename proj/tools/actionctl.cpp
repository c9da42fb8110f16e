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

// actionctl: validate annotations, list intents, serve a mapping as a
// gateway, and drive flows against a running gateway.
//
// Exit codes: 0 ok, 1 findings, 2 usage, 3 runtime or transport failure.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pthread.h>

#include "CLI11.hpp"
#include "actions/agent.hpp"
#include "actions/errors.hpp"
#include "actions/gateway.hpp"
#include "actions/text.hpp"

namespace {

using namespace actions;

constexpr int kOk = 0;
constexpr int kFindings = 1;
constexpr int kUsage = 2;
constexpr int kRuntime = 3;

// Thrown by helpers to leave a command with a given exit code.
struct Exit {
  int code;
};

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string require_file(const std::string& path) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "actionctl: cannot read " << path << "\n";
    throw Exit{kUsage};
  }
  return *text;
}

std::vector<std::string> vocab_paths(const std::vector<std::string>& flags) {
  if (!flags.empty()) return flags;
  if (const char* env = std::getenv("ACTIONS_VOCAB_PATH"); env && *env) return text::split(env, ':');
  return {ACTIONS_DEFAULT_VOCAB_DIR};
}

std::shared_ptr<const Vocabulary> load_vocab(const std::vector<std::string>& flags) {
  try {
    return std::make_shared<const Vocabulary>(load_vocabulary_paths(vocab_paths(flags)));
  } catch (const Error& e) {
    std::cerr << "actionctl: vocabulary: " << e.kind() << ": " << e.what() << "\n";
    throw Exit{kRuntime};
  }
}

bool is_action_node(const EntityGraph& g, NodeRef r, const Vocabulary& v) {
  for (const auto& t : g.node(r).types) {
    if (v.has_class(t) && v.is_subclass_of(t, "Action")) return true;
  }
  return false;
}

// --- validate ---------------------------------------------------------------

struct ValidateOpts {
  std::string file;
  std::vector<std::string> vocab;
  bool json = false;
};

int cmd_validate(const ValidateOpts& o) {
  std::string doc = require_file(o.file);
  auto v = load_vocab(o.vocab);
  ValidationReport report;
  std::vector<std::string> diagnostics;
  try {
    EntityGraph g = parse_graph(doc);
    report = validate_graph(g, *v);
    for (auto r : g.roots()) {
      if (!is_action_node(g, r, *v)) continue;
      try {
        (void)parse_action(g, r, *v);
      } catch (const Error& e) {
        diagnostics.push_back(subject_label(g, r) + ": " + e.kind() + ": " + e.what());
      }
    }
  } catch (const Error& e) {
    diagnostics.push_back(e.kind() + ": " + e.what());
  }
  if (o.json) {
    nlohmann::ordered_json out;
    out["file"] = o.file;
    out["violations"] = report.to_json();
    out["diagnostics"] = diagnostics;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << report.to_table();
    for (const auto& d : diagnostics) std::cout << "ERROR\t" << d << "\n";
    if (report.empty() && diagnostics.empty()) std::cout << o.file << ": valid\n";
  }
  return report.empty() && diagnostics.empty() ? kOk : kFindings;
}

// --- intents ----------------------------------------------------------------

struct IntentsOpts {
  std::string file;
  std::vector<std::string> vocab;
  bool json = false;
};

std::string slot_paths(const std::vector<Slot>& slots) {
  std::string out;
  for (const auto& s : slots) out += (out.empty() ? "" : ",") + s.path.str();
  return out.empty() ? "-" : out;
}

int cmd_intents(const IntentsOpts& o) {
  std::string doc = require_file(o.file);
  auto v = load_vocab(o.vocab);
  std::vector<IntentDescriptor> intents;
  int code = kOk;
  try {
    EntityGraph g = parse_graph(doc);
    for (auto r : g.roots()) {
      if (!is_action_node(g, r, *v)) continue;
      try {
        intents.push_back(extract_intent(parse_action(g, r, *v)));
      } catch (const Error& e) {
        std::cerr << subject_label(g, r) << ": " << e.kind() << ": " << e.what() << "\n";
        code = kFindings;
      }
    }
  } catch (const Error& e) {
    std::cerr << o.file << ": " << e.kind() << ": " << e.what() << "\n";
    return kFindings;
  }
  if (intents.empty() && code == kOk) {
    std::cerr << o.file << ": no actions found\n";
    code = kFindings;
  }
  if (o.json) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& i : intents) {
      nlohmann::ordered_json j;
      j["name"] = i.name;
      j["actionId"] = i.action_id;
      auto slots = [](const std::vector<Slot>& ss) {
        auto a = nlohmann::ordered_json::array();
        for (const auto& s : ss) a.push_back({{"path", s.path.str()}, {"prompt", s.prompt_name}, {"datatype", s.datatype}});
        return a;
      };
      j["requiredSlots"] = slots(i.required_slots);
      j["optionalSlots"] = slots(i.optional_slots);
      out.push_back(j);
    }
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& i : intents)
      std::cout << i.name << "\trequired=" << slot_paths(i.required_slots)
                << "\toptional=" << slot_paths(i.optional_slots) << "\n";
  }
  return code;
}

// --- serve ------------------------------------------------------------------

struct ServeOpts {
  std::string mapping;
  std::vector<std::string> vocab;
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string backend;
  std::vector<std::string> cors;
  std::vector<std::string> credentials;
  std::string console;
};

int cmd_serve(const ServeOpts& o) {
  // Block termination signals before any server thread exists so that only
  // sigwait below sees them.
  sigset_t sigs;
  sigemptyset(&sigs);
  sigaddset(&sigs, SIGINT);
  sigaddset(&sigs, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &sigs, nullptr);

  auto v = load_vocab(o.vocab);
  auto doc = read_file(o.mapping);
  if (!doc) {
    std::cerr << "actionctl: cannot read mapping " << o.mapping << "\n";
    return kRuntime;
  }
  GatewayConfig cfg;
  cfg.host = o.host;
  cfg.port = o.port;
  cfg.backend = o.backend;
  cfg.cors_origins = o.cors;
  cfg.console_dir = o.console;
  for (const auto& c : o.credentials) {
    auto eq = c.find('=');
    if (eq == std::string::npos) {
      std::cerr << "actionctl: --credential expects RESOURCE=TOKEN\n";
      return kUsage;
    }
    cfg.credentials[c.substr(0, eq)] = c.substr(eq + 1);
  }
  std::unique_ptr<Gateway> gw;
  try {
    gw = std::make_unique<Gateway>(load_mapping(*doc, v), cfg);
    gw->start();
  } catch (const Error& e) {
    std::cerr << "actionctl: " << o.mapping << ": " << e.kind() << ": " << e.what() << "\n";
    return kRuntime;
  }
  std::cout << "serving " << gw->base_url() << "/actions" << std::endl;
  int sig = 0;
  sigwait(&sigs, &sig);
  gw->stop();
  return kOk;
}

// --- invoke / flow ----------------------------------------------------------

struct AgentOpts {
  std::string entry;
  std::vector<std::string> vocab;
  std::string token;
};

struct InvokeOpts : AgentOpts {
  std::string action;
  std::vector<std::string> inputs;
};

struct FlowOpts : AgentOpts {
  std::string script;
  bool interactive = false;
  std::size_t page_size = 3;
  std::string transcript;
  bool json = false;
};

std::unique_ptr<HttpTransport> make_transport(const AgentOpts& o) {
  auto t = std::make_unique<HttpTransport>();
  if (!o.token.empty()) t->set_authorization("Bearer " + o.token);
  return t;
}

Discovery discover(Transport& t, const AgentOpts& o, const Vocabulary& v) {
  try {
    auto d = discover_actions(t, o.entry, v);
    for (const auto& msg : d.diagnostics) std::cerr << "discover: " << msg << "\n";
    return d;
  } catch (const Error& e) {
    std::cerr << "actionctl: " << e.kind() << ": " << e.what() << "\n";
    throw Exit{kRuntime};
  }
}

// Prints transcript lines added since \p from.
std::size_t echo_transcript(const FlowSession& s, std::size_t from) {
  for (std::size_t i = from; i < s.transcript.size(); ++i) {
    const auto& e = s.transcript[i];
    std::cout << (e.speaker == "user" ? "User: " : "Bot: ") << e.text << "\n";
  }
  std::cout.flush();
  return s.transcript.size();
}

int exit_for(const FlowSession& s) {
  if (s.state == FlowState::kCompleted) return kOk;
  if (s.state == FlowState::kFailed && s.last_status == 422) return kFindings;
  return kRuntime;
}

int cmd_invoke(const InvokeOpts& o) {
  auto v = load_vocab(o.vocab);
  auto t = make_transport(o);
  auto found = discover(*t, o, *v);
  std::optional<std::size_t> pick = match_intent(found.actions, o.action);
  for (std::size_t i = 0; !pick && i < found.actions.size(); ++i) {
    const auto& d = found.actions[i];
    if (d.id == o.action || d.entry_point.url_template.ends_with("/invoke/" + o.action)) pick = i;
  }
  if (!pick) {
    std::cerr << "actionctl: no action matches '" << o.action << "'\n";
    return kFindings;
  }
  FlowSession s = start_session(found.actions[*pick], "invoke");
  for (const auto& kv : o.inputs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "actionctl: --input expects PATH=VALUE\n";
      return kUsage;
    }
    try {
      s = fill_slot(s, PropertyPath::parse(kv.substr(0, eq)), kv.substr(eq + 1));
    } catch (const Error& e) {
      std::cerr << "actionctl: " << e.kind() << ": " << e.what() << "\n";
      return kFindings;
    }
    if (s.last_error) {
      std::cerr << "actionctl: " << *s.last_error << "\n";
      return kFindings;
    }
  }
  if (s.state != FlowState::kReadyToInvoke) {
    for (const auto& p : s.pending_slots) std::cerr << "missing required input " << p.path.str() << "\n";
    return kFindings;
  }
  s = invoke_current(s, *t, *v);
  if (s.last_result) std::cout << serialize_graph(*s.last_result, 2) << "\n";
  if (s.state == FlowState::kFailed) {
    std::cerr << "actionctl: invocation failed: " << s.last_error.value_or("") << "\n";
    if (!s.last_violations.empty()) std::cerr << s.last_violations.dump(2) << "\n";
    return s.last_status == 422 ? kFindings : kRuntime;
  }
  return kOk;
}

int run_script(FlowSession& s, Transport& t, const Vocabulary& v, const std::string& script_path) {
  nlohmann::json steps;
  try {
    steps = nlohmann::json::parse(require_file(script_path));
    if (!steps.is_array()) throw FormatError("flow script must be a JSON array");
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "actionctl: " << script_path << ": " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "actionctl: " << script_path << ": " << e.what() << "\n";
    return kUsage;
  }
  std::size_t shown = echo_transcript(s, 0);
  for (const auto& step : steps) {
    try {
      auto op = step.at("op").get<std::string>();
      if (op == "choose") {
        s = choose(s, step.at("index").get<std::size_t>());
      } else if (op == "fill") {
        auto value = step.at("value");
        s = fill_slot(s, PropertyPath::parse(step.at("path").get<std::string>()),
                      value.is_string() ? value.get<std::string>() : value.dump());
      } else if (op == "invoke") {
        s = invoke_current(s, t, v);
      } else {
        std::cerr << "actionctl: unknown step op '" << op << "'\n";
        return kUsage;
      }
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "actionctl: malformed step " << step.dump() << ": " << e.what() << "\n";
      return kUsage;
    } catch (const Error& e) {
      shown = echo_transcript(s, shown);
      std::cerr << "actionctl: " << e.kind() << ": " << e.what() << "\n";
      return kRuntime;
    }
    shown = echo_transcript(s, shown);
    if (s.state == FlowState::kFailed || s.state == FlowState::kCompleted) break;
  }
  return exit_for(s);
}

bool read_line(std::string& line) {
  std::cout << "> " << std::flush;
  return static_cast<bool>(std::getline(std::cin, line));
}

int run_interactive(FlowSession& s, Transport& t, const Vocabulary& v, std::size_t page_size) {
  if (s.entry_actions.empty()) {
    std::cout << "The gateway offers no actions.\n";
    return kFindings;
  }
  std::size_t shown = echo_transcript(s, 0);
  std::size_t page = 0;
  std::string line;
  while (s.state != FlowState::kCompleted && s.state != FlowState::kFailed) {
    try {
      switch (s.state) {
        case FlowState::kDiscovering: {
          for (std::size_t i = 0; i < s.entry_actions.size(); ++i)
            std::cout << "  " << i + 1 << ". " << capability_summary(extract_intent(s.entry_actions[i])) << "\n";
          if (!read_line(line)) return kRuntime;
          std::size_t index = 0;
          if (auto n = std::atoi(line.c_str()); n > 0) {
            index = static_cast<std::size_t>(n - 1);
          } else if (auto m = match_intent(s.entry_actions, line)) {
            index = *m;
          } else {
            std::cout << "Sorry, I do not know that one.\n";
            continue;
          }
          s = choose(s, index);
          break;
        }
        case FlowState::kEliciting:
          if (!read_line(line)) return kRuntime;
          s = fill_slot(s, s.pending_slots.front().path, line);
          break;
        case FlowState::kReadyToInvoke:
          s = invoke_current(s, t, v);
          page = 0;
          break;
        case FlowState::kPresenting: {
          std::size_t first = page * page_size;
          for (std::size_t i = first; i < s.choices.size() && i < first + page_size; ++i)
            std::cout << "  " << i + 1 << ". " << s.choices[i].label << "\n";
          if (first + page_size < s.choices.size()) std::cout << "  (type 'more' for further options)\n";
          if (!read_line(line)) return kRuntime;
          if (line == "more") {
            if (first + page_size < s.choices.size()) ++page;
            continue;
          }
          auto n = std::atoi(line.c_str());
          if (n <= 0) {
            std::cout << "Please answer with a number.\n";
            continue;
          }
          s = choose(s, static_cast<std::size_t>(n - 1));
          break;
        }
        default:
          break;
      }
    } catch (const IndexOutOfRange&) {
      std::cout << "There is no such option.\n";
    }
    shown = echo_transcript(s, shown);
  }
  return exit_for(s);
}

int cmd_flow(const FlowOpts& o) {
  auto v = load_vocab(o.vocab);
  auto t = make_transport(o);
  auto found = discover(*t, o, *v);
  FlowSession s = new_session("flow", std::move(found.actions));
  int code = o.interactive ? run_interactive(s, *t, *v, o.page_size) : run_script(s, *t, *v, o.script);
  std::cout << "state: " << to_string(s.state) << "\n";
  if (s.state == FlowState::kFailed && !s.last_violations.empty())
    std::cout << "violations: " << s.last_violations.dump() << "\n";
  if (!o.transcript.empty()) {
    std::ofstream out(o.transcript, std::ios::binary);
    out << transcript_jsonl(s);
  }
  if (o.json) std::cout << session_to_json(s).dump(2) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Validate, serve and consume Web APIs described with schema.org actions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "actionctl 0.1.0");

  ValidateOpts vo;
  auto* validate = app.add_subcommand("validate", "closed-world validation of an annotation file");
  validate->add_option("file", vo.file, "annotation document")->required();
  validate->add_option("--vocab", vo.vocab, "vocabulary file or directory (repeatable)");
  validate->add_flag("--json", vo.json, "machine-readable report");

  IntentsOpts io;
  auto* intents = app.add_subcommand("intents", "list intents and slots of the actions in a file");
  intents->add_option("file", io.file, "annotation document")->required();
  intents->add_option("--vocab", io.vocab, "vocabulary file or directory (repeatable)");
  intents->add_flag("--json", io.json, "machine-readable listing");

  ServeOpts so;
  auto* serve = app.add_subcommand("serve", "run the gateway for a mapping");
  serve->add_option("--mapping", so.mapping, "mapping document")->required();
  serve->add_option("--vocab", so.vocab, "vocabulary file or directory (repeatable)");
  serve->add_option("--port", so.port, "listen port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", so.host, "listen address");
  serve->add_option("--backend", so.backend, "backend base URL, or 'self' for the bundled mock");
  serve->add_option("--cors", so.cors, "allowed console origin (repeatable, '*' for any)");
  serve->add_option("--credential", so.credentials, "RESOURCE=TOKEN for token/basic resources (repeatable)");
  serve->add_option("--console", so.console, "static console bundle served under /console");

  InvokeOpts vko;
  auto* invoke = app.add_subcommand("invoke", "invoke one published action");
  invoke->add_option("--entry", vko.entry, "gateway base URL")->required();
  invoke->add_option("--action", vko.action, "intent name, action id or resource id")->required();
  invoke->add_option("--input", vko.inputs, "PATH=VALUE (repeatable)");
  invoke->add_option("--vocab", vko.vocab, "vocabulary file or directory (repeatable)");
  invoke->add_option("--token", vko.token, "bearer token forwarded to the gateway");

  FlowOpts fo;
  auto* flow = app.add_subcommand("flow", "drive a multi-step flow through potential actions");
  flow->add_option("--entry", fo.entry, "gateway base URL")->required();
  auto* script = flow->add_option("--script", fo.script, "JSON step script");
  auto* inter = flow->add_flag("--interactive", fo.interactive, "prompt on the terminal");
  script->excludes(inter);
  flow->add_option("--page-size", fo.page_size, "choices shown per page")->check(CLI::PositiveNumber);
  flow->add_option("--transcript", fo.transcript, "write the transcript as JSON lines");
  flow->add_option("--vocab", fo.vocab, "vocabulary file or directory (repeatable)");
  flow->add_option("--token", fo.token, "bearer token forwarded to the gateway");
  flow->add_flag("--json", fo.json, "print the final session as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (flow->parsed() && fo.script.empty() && !fo.interactive) {
    std::cerr << "actionctl flow: one of --script or --interactive is required\n";
    return kUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(vo);
    if (intents->parsed()) return cmd_intents(io);
    if (serve->parsed()) return cmd_serve(so);
    if (invoke->parsed()) return cmd_invoke(vko);
    if (flow->parsed()) return cmd_flow(fo);
  } catch (const Exit& e) {
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "actionctl: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
