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

#include "actions/gateway.hpp"

#include <algorithm>
#include <charconv>
#include <shared_mutex>
#include <thread>

#include "actions/errors.hpp"
#include "actions/text.hpp"
#include "httplib.h"

namespace actions {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kJson = "application/json";
constexpr const char* kLdJson = "application/ld+json";

std::vector<MockInventory::Room> fixture_rooms() {
  return {{"R1", "Einzelzimmer", 59, 1},
          {"R2", "Doppelzimmer", 89, 2},
          {"R3", "Doppelzimmer Superior", 109, 2},
          {"R4", "Suite", 189, 4}};
}

std::optional<long> to_long(const std::string& s) {
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

MockInventory::Reply bad_request(const std::string& why) { return {400, {{"error", why}}}; }

void reply_json(httplib::Response& res, int status, const std::string& body, const char* type = kJson) {
  res.status = status;
  res.set_content(body, type);
}

void reply_error(httplib::Response& res, int status, const std::string& why) {
  reply_json(res, status, json{{"error", why}}.dump());
}

}  // namespace

// ---------------------------------------------------------------------------
// Mock backend

MockInventory::MockInventory() : MockInventory(fixture_rooms()) {}

MockInventory::MockInventory(std::vector<Room> rooms) : rooms_(std::move(rooms)) {
  std::sort(rooms_.begin(), rooms_.end(), [](const Room& a, const Room& b) { return a.id < b.id; });
}

MockInventory::Reply MockInventory::search(const std::string& from, const std::string& to, long adults,
                                           long children) const {
  if (!text::is_iso_date(from) || !text::is_iso_date(to)) return bad_request("from and to must be YYYY-MM-DD");
  if (from >= to) return bad_request("from must be before to");
  if (adults < 1 || children < 0) return bad_request("adults must be >= 1 and children >= 0");
  json rooms = json::array();
  for (const auto& r : rooms_) {
    if (r.max_adults >= adults) rooms.push_back({{"id", r.id}, {"name", r.name}, {"price", r.price_per_night}});
  }
  return {200, {{"from", from}, {"to", to}, {"currency", "EUR"}, {"rooms", std::move(rooms)}}};
}

MockInventory::Reply MockInventory::book(const std::string& room_id, const std::string& from, const std::string& to,
                                         const std::string& guest) {
  if (!text::is_iso_date(from) || !text::is_iso_date(to) || from >= to)
    return bad_request("from and to must be ordered YYYY-MM-DD dates");
  bool known = std::any_of(rooms_.begin(), rooms_.end(), [&](const Room& r) { return r.id == room_id; });
  if (!known) return {404, {{"error", "unknown room " + room_id}}};

  std::lock_guard lock(mu_);
  for (const auto& b : bookings_) {
    // half-open [from, to) stays; ISO dates compare lexicographically
    if (b.room_id == room_id && from < b.to && b.from < to)
      return {409, {{"error", "room " + room_id + " is already booked from " + b.from + " to " + b.to}}};
  }
  Booking b{"C-" + std::to_string(next_confirmation_++), room_id, from, to, guest};
  bookings_.push_back(b);
  json body = {{"roomId", room_id}, {"from", from}, {"to", to}, {"guest", guest}};
  if (!omit_confirmation_) body["confirmation"] = b.confirmation;
  return {200, body};
}

std::vector<MockInventory::Booking> MockInventory::bookings() const {
  std::lock_guard lock(mu_);
  return bookings_;
}

// ---------------------------------------------------------------------------
// Native calls

HttpResult execute_native(const NativeRequest& req, std::chrono::milliseconds timeout) {
  auto parts = text::split_url(req.url);
  if (!parts) return {0, "", "not an absolute URL: " + req.url};
  if (parts->origin.starts_with("https:")) return {0, "", "https backends are not supported: " + parts->origin};
  httplib::Client cli(parts->origin);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);

  std::string target = parts->path.empty() ? "/" : parts->path;
  if (!parts->query.empty()) target += "?" + parts->query;
  httplib::Headers headers;
  std::string content_type = req.header("Content-Type").value_or(kJson);
  for (const auto& [k, v] : req.headers) {
    if (text::to_lower(k) != "content-type") headers.emplace(k, v);
  }
  const std::string body = req.body.value_or("");
  httplib::Result res;
  if (req.method == "GET") {
    res = cli.Get(target, headers);
  } else if (req.method == "POST") {
    res = cli.Post(target, headers, body, content_type);
  } else if (req.method == "PUT") {
    res = cli.Put(target, headers, body, content_type);
  } else if (req.method == "PATCH") {
    res = cli.Patch(target, headers, body, content_type);
  } else if (req.method == "DELETE") {
    res = cli.Delete(target, headers, body, content_type);
  } else {
    return {0, "", "unsupported method " + req.method};
  }
  if (!res) return {0, "", "cannot reach " + parts->origin + ": " + httplib::to_string(res.error())};
  return {res->status, res->body, ""};
}

// ---------------------------------------------------------------------------
// Gateway

namespace {

struct SessionSlot {
  std::mutex mu;
  FlowSession session;
};

}  // namespace

struct Gateway::Impl {
  Impl(MappingDocument m, GatewayConfig c) : source(std::move(m)), config(std::move(c)) {}

  MappingDocument source;
  GatewayConfig config;
  MappingDocument native;     // backend resolved
  MappingDocument published;  // entry points rewritten to this gateway
  std::string base;
  std::string entry;
  MockInventory mock;
  httplib::Server server;
  std::thread thread;
  bool bound = false;

  std::shared_mutex sessions_mu;
  std::map<std::string, std::shared_ptr<SessionSlot>> sessions;
  std::atomic<std::size_t> next_session{1};

  class LocalTransport : public Transport {
   public:
    explicit LocalTransport(Impl& gw) : gw_(gw) {}
    HttpResult get(const std::string& url) override {
      if (url == gw_.base + "/actions") return {200, gw_.entry, ""};
      return HttpTransport().get(url);
    }
    HttpResult post(const std::string& url, const std::string& body, const std::string& content_type) override {
      std::string prefix = gw_.base + "/invoke/";
      if (url.starts_with(prefix)) {
        auto inv = gw_.invoke(std::string_view(url).substr(prefix.size()), body, std::nullopt);
        return {inv.http_status, inv.envelope.dump(), ""};
      }
      return HttpTransport().post(url, body, content_type);
    }

   private:
    Impl& gw_;
  };

  void prepare(int port) {
    base = "http://" + config.host + ":" + std::to_string(port);
    native = source;
    if (config.backend == "self") {
      native = source.with_backend(base + "/mock");
    } else if (!config.backend.empty()) {
      native = source.with_backend(config.backend);
    }
    published = native.with_entry_base(base);
    for (auto& r : published.resources) r.descriptor.auth.token.clear();  // never republish secrets

    ordered_json doc = ordered_json::array();
    for (const auto& r : published.resources) {
      if (!published.is_published(r.resource_id)) continue;
      for (auto& el : graph_to_json(serialize_action(r.descriptor))) doc.push_back(std::move(el));
    }
    entry = doc.dump(2);
  }

  AuthenticationSpec effective_auth(const ResourceMapping& r, const std::optional<std::string>& authorization) {
    AuthenticationSpec a = r.descriptor.auth;
    if (a.method != AuthMethod::kToken && a.method != AuthMethod::kBasic) return a;
    if (auto it = config.credentials.find(r.resource_id); it != config.credentials.end()) {
      a.token = it->second;
    } else if (authorization) {
      std::string scheme = a.method == AuthMethod::kToken ? "Bearer " : "Basic ";
      if (authorization->starts_with(scheme)) a.token = authorization->substr(scheme.size());
    }
    return a;
  }

  Invocation invoke(std::string_view rid, std::string_view body, const std::optional<std::string>& authorization) {
    auto t0 = std::chrono::steady_clock::now();
    ordered_json env;
    env["request"] = nullptr;
    env["response"] = ordered_json::array();
    env["nativeStatus"] = 0;
    env["violations"] = ordered_json::array();
    auto finish = [&](int status) {
      env["timingMs"] =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      return Invocation{status, env};
    };
    auto fail = [&](int status, const std::string& why) {
      env["error"] = why;
      return finish(status);
    };

    const auto* r = native.find(rid);
    if (!r) return fail(404, "unknown resource '" + std::string(rid) + "'");
    const Vocabulary& v = native.vocabulary();

    EntityGraph request;
    try {
      request = parse_graph(body);
    } catch (const Error& e) {
      return fail(400, e.kind() + ": " + e.what());
    }
    if (request.roots().size() != 1) return fail(400, "expected exactly one action instance");
    env["request"] = graph_to_json(request).at(0);

    auto report = validate_request_inputs(r->descriptor, request, v);
    if (!report.empty()) {
      env["violations"] = report.to_json();
      return finish(422);
    }

    NativeRequest nreq;
    try {
      nreq = ground_request(native, rid, request, effective_auth(*r, authorization));
    } catch (const ValidationFailed& e) {
      env["violations"] = e.report().to_json();
      return finish(422);
    } catch (const MissingCredentials& e) {
      return fail(401, e.kind() + ": " + e.what());
    } catch (const Error& e) {
      return fail(422, e.kind() + ": " + e.what());
    }

    HttpResult nres = execute_native(nreq);
    env["nativeStatus"] = nres.status;
    if (nres.status == 0) return fail(502, nres.error);

    EntityGraph lifted;
    try {
      lifted = lift_response(published, rid, nres.body, nres.status);
    } catch (const Error& e) {
      return fail(502, e.kind() + ": " + e.what());
    }
    env["response"] = graph_to_json(lifted);
    if (nres.status < 200 || nres.status >= 300) return finish(nres.status);

    auto promised = validate_response_outputs(r->descriptor, lifted, v);
    if (!promised.empty()) {
      env["violations"] = promised.to_json();
      return finish(502);
    }
    return finish(200);
  }

  std::vector<ActionDescriptor> entry_actions() const {
    std::vector<ActionDescriptor> out;
    for (const auto& r : published.resources) {
      if (published.is_published(r.resource_id)) out.push_back(r.descriptor);
    }
    return out;
  }

  std::shared_ptr<SessionSlot> find_session(const std::string& id) {
    std::shared_lock lock(sessions_mu);
    auto it = sessions.find(id);
    return it == sessions.end() ? nullptr : it->second;
  }

  void routes();
  void mock_routes();
  void session_routes();
};

void Gateway::Impl::mock_routes() {
  server.Get("/mock/search", [this](const httplib::Request& req, httplib::Response& res) {
    mock.count_request();
    auto adults = to_long(req.get_param_value("adults"));
    auto children = req.has_param("children") ? to_long(req.get_param_value("children")) : std::optional<long>(0);
    MockInventory::Reply reply = !adults || !children
                                     ? bad_request("adults and children must be integers")
                                     : mock.search(req.get_param_value("from"), req.get_param_value("to"), *adults,
                                                   *children);
    reply_json(res, reply.status, reply.body.dump());
  });
  server.Post("/mock/book", [this](const httplib::Request& req, httplib::Response& res) {
    mock.count_request();
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) return reply_error(res, 400, "body must be a JSON object");
    auto field = [&](const char* k) { return body.contains(k) && body[k].is_string() ? body[k].get<std::string>() : ""; };
    auto reply = mock.book(field("roomId"), field("from"), field("to"), field("guestName"));
    reply_json(res, reply.status, reply.body.dump());
  });
  auto echo = [this](const httplib::Request& req, httplib::Response& res) {
    mock.count_request();
    json out;
    out["method"] = req.method;
    out["path"] = req.path;
    json q = json::object();
    for (const auto& [k, v] : req.params) q[k] = v;
    out["query"] = q;
    json h = json::object();
    for (const auto& [k, v] : req.headers) h[k] = v;
    out["headers"] = h;
    if (req.body.empty()) {
      out["body"] = nullptr;
    } else {
      json b = json::parse(req.body, nullptr, false);
      out["body"] = b.is_discarded() ? json(req.body) : b;
    }
    reply_json(res, 200, out.dump());
  };
  server.Get("/mock/echo", echo);
  server.Post("/mock/echo", echo);
  server.Get("/mock/bookings", [this](const httplib::Request&, httplib::Response& res) {
    json list = json::array();
    for (const auto& b : mock.bookings()) {
      list.push_back({{"confirmation", b.confirmation}, {"roomId", b.room_id}, {"from", b.from}, {"to", b.to},
                      {"guest", b.guest}});
    }
    reply_json(res, 200, json{{"bookings", list}, {"requests", mock.request_count()}}.dump());
  });
}

void Gateway::Impl::session_routes() {
  auto session_reply = [](httplib::Response& res, int status, const FlowSession& s) {
    reply_json(res, status, session_to_json(s).dump());
  };
  // Runs \p op on the session under its lock, mapping library errors to
  // HTTP statuses.
  auto with_session = [this, session_reply](const httplib::Request& req, httplib::Response& res, auto op) {
    auto slot = find_session(req.matches[1]);
    if (!slot) return reply_error(res, 404, "unknown session");
    std::lock_guard lock(slot->mu);
    try {
      // ops consume the session by value; a throw must not leave it moved-from
      FlowSession work = slot->session;
      int status = op(work);
      slot->session = std::move(work);
      session_reply(res, status, slot->session);
    } catch (const StateError& e) {
      reply_error(res, 409, e.kind() + ": " + e.what());
    } catch (const IndexOutOfRange& e) {
      reply_error(res, 400, e.kind() + ": " + e.what());
    } catch (const Error& e) {
      reply_error(res, 400, e.kind() + ": " + e.what());
    } catch (const json::exception& e) {
      reply_error(res, 400, e.what());
    }
  };

  server.Post("/sessions", [this, session_reply](const httplib::Request& req, httplib::Response& res) {
    json body = req.body.empty() ? json::object() : json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) return reply_error(res, 400, "body must be a JSON object");
    auto actions = entry_actions();
    FlowSession s = new_session("s-" + std::to_string(next_session++), actions);
    std::optional<std::size_t> pick;
    if (body.contains("actionId")) {
      auto want = body["actionId"].get<std::string>();
      for (std::size_t i = 0; i < actions.size(); ++i) {
        if (actions[i].id == want || actions[i].entry_point.url_template.ends_with("/invoke/" + want)) pick = i;
      }
      if (!pick) return reply_error(res, 404, "unknown action '" + want + "'");
    } else if (body.contains("intent")) {
      pick = match_intent(actions, body["intent"].get<std::string>());
      if (!pick) return reply_error(res, 404, "no unique intent matches '" + body["intent"].get<std::string>() + "'");
    }
    if (pick) s = choose(std::move(s), *pick);
    auto slot = std::make_shared<SessionSlot>();
    slot->session = std::move(s);
    {
      std::unique_lock lock(sessions_mu);
      sessions[slot->session.id] = slot;
    }
    res.set_header("Location", "/sessions/" + slot->session.id);
    session_reply(res, 201, slot->session);
  });
  server.Get(R"(/sessions/([^/]+))", [with_session](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [](FlowSession&) { return 200; });
  });
  server.Get(R"(/sessions/([^/]+)/transcript)", [this](const httplib::Request& req, httplib::Response& res) {
    auto slot = find_session(req.matches[1]);
    if (!slot) return reply_error(res, 404, "unknown session");
    std::lock_guard lock(slot->mu);
    res.set_content(transcript_jsonl(slot->session), "application/x-ndjson");
  });
  server.Post(R"(/sessions/([^/]+)/slots)", [with_session](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](FlowSession& s) {
      json body = json::parse(req.body);
      std::vector<std::pair<std::string, std::string>> fills;
      auto as_text = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
      if (body.contains("path")) fills.emplace_back(body.at("path").get<std::string>(), as_text(body.at("value")));
      if (auto it = body.find("values"); it != body.end()) {
        for (const auto& [k, v] : it->items()) fills.emplace_back(k, as_text(v));
      }
      if (fills.empty()) throw FormatError("expected {path, value} or {values: {...}}");
      for (const auto& [path, value] : fills) {
        s = fill_slot(std::move(s), PropertyPath::parse(path), value);
        if (s.last_error) return 422;
      }
      return 200;
    });
  });
  server.Post(R"(/sessions/([^/]+)/invoke)", [this, with_session](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](FlowSession& s) {
      LocalTransport t(*this);
      s = invoke_current(std::move(s), t, native.vocabulary());
      return 200;
    });
  });
  server.Post(R"(/sessions/([^/]+)/choose)", [with_session](const httplib::Request& req, httplib::Response& res) {
    with_session(req, res, [&](FlowSession& s) {
      json body = json::parse(req.body);
      auto index = body.at("index").get<long long>();
      if (index < 0) throw IndexOutOfRange("negative choice index");
      s = choose(std::move(s), static_cast<std::size_t>(index));
      return 200;
    });
  });
}

void Gateway::Impl::routes() {
  server.Get("/actions", [this](const httplib::Request&, httplib::Response& res) {
    reply_json(res, 200, entry, kLdJson);
  });
  server.Post(R"(/invoke/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> auth;
    if (req.has_header("Authorization")) auth = req.get_header_value("Authorization");
    auto inv = invoke(req.matches[1].str(), req.body, auth);
    reply_json(res, inv.http_status, inv.envelope.dump());
  });
  mock_routes();
  session_routes();

  server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_header("Origin")) return;
    auto origin = req.get_header_value("Origin");
    const auto& allow = config.cors_origins;
    bool ok = std::find(allow.begin(), allow.end(), "*") != allow.end() ||
              std::find(allow.begin(), allow.end(), origin) != allow.end();
    if (!ok) return;
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Vary", "Origin");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, Authorization");
  });
  if (!config.console_dir.empty()) server.set_mount_point("/console", config.console_dir);
}

Gateway::Gateway(MappingDocument mapping, GatewayConfig config)
    : impl_(std::make_unique<Impl>(std::move(mapping), std::move(config))) {
  if (impl_->config.port < 0 || impl_->config.port > 65535) throw FormatError("port out of range");
  // httplib's default sets SO_REUSEPORT, which lets a second gateway share a
  // busy port instead of failing.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  impl_->routes();
  impl_->prepare(impl_->config.port);
}

Gateway::~Gateway() { stop(); }

int Gateway::bind() {
  auto& c = impl_->config;
  int port = c.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(c.host);
    if (port < 0) throw TransportError("cannot bind " + c.host);
  } else if (!impl_->server.bind_to_port(c.host, port)) {
    throw TransportError("cannot bind " + c.host + ":" + std::to_string(port));
  }
  impl_->bound = true;
  impl_->prepare(port);
  return port;
}

void Gateway::listen() {
  if (!impl_->bound) throw StateError("listen() before bind()");
  impl_->server.listen_after_bind();
}

void Gateway::start() {
  bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void Gateway::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string Gateway::base_url() const { return impl_->base; }
const MappingDocument& Gateway::published() const { return impl_->published; }
std::string Gateway::entry_document() const { return impl_->entry; }
MockInventory& Gateway::mock() { return impl_->mock; }

Invocation Gateway::handle_invocation(std::string_view resource_id, std::string_view body,
                                      const std::optional<std::string>& authorization) {
  return impl_->invoke(resource_id, body, authorization);
}

}  // namespace actions
