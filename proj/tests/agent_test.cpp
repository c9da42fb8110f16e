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

#include <gtest/gtest.h>

#include <memory>
#include <random>
#include <set>
#include <string>

#include "actions/errors.hpp"
#include "actions/gateway.hpp"
#include "fixtures.hpp"

using namespace actions;
using nlohmann::json;

namespace {

std::unique_ptr<Gateway> hotel() {
  GatewayConfig c;
  c.port = 0;
  c.backend = "self";
  auto gw = std::make_unique<Gateway>(
      load_mapping(fixtures::text("mappings/hotel.json"), fixtures::vocab()), c);
  gw->start();
  return gw;
}

// Serves a fixed body at /actions.
class CannedTransport : public Transport {
 public:
  explicit CannedTransport(std::string body) : body_(std::move(body)) {}
  HttpResult get(const std::string&) override { return {200, body_, ""}; }
  HttpResult post(const std::string&, const std::string&, const std::string&) override { return {0, "", "offline"}; }

 private:
  std::string body_;
};

FlowSession searched(Gateway& gw, HttpTransport& t) {
  auto d = discover_actions(t, gw.base_url(), *fixtures::vocab());
  auto s = choose(new_session("t", d.actions), 0);
  s = fill_slot(std::move(s), PropertyPath::parse("object.checkinTime"), "1.1.18");
  s = fill_slot(std::move(s), PropertyPath::parse("object.checkoutTime"), "2.1.18");
  s = fill_slot(std::move(s), PropertyPath::parse("object.containsPlace.numAdults"), "1");
  s = fill_slot(std::move(s), PropertyPath::parse("object.containsPlace.numChildren"), "0");
  return invoke_current(std::move(s), t, *fixtures::vocab());
}

}  // namespace

TEST(Discover, HotelGatewayOffersSearch) {
  auto gw = hotel();
  HttpTransport t;
  auto d = discover_actions(t, gw->base_url() + "/", *fixtures::vocab());
  ASSERT_EQ(d.actions.size(), 1u);
  EXPECT_TRUE(d.diagnostics.empty());
  EXPECT_EQ(extract_intent(d.actions[0]).name, "search.lodgingbusiness");
  EXPECT_EQ(discover_actions(t, gw->base_url() + "/actions", *fixtures::vocab()).actions, d.actions);
}

TEST(Discover, EmptyAndMalformedEntries) {
  CannedTransport empty("[]");
  auto d = discover_actions(empty, "http://x", *fixtures::vocab());
  EXPECT_TRUE(d.actions.empty());
  ASSERT_EQ(d.diagnostics.size(), 1u);
  EXPECT_EQ(d.diagnostics[0], "entry document lists no actions");

  auto gw = hotel();
  auto doc = json::parse(gw->entry_document());
  doc.insert(doc.begin(), json{{"@id", 5}, {"@type", "SearchAction"}});
  CannedTransport mixed(doc.dump());
  d = discover_actions(mixed, "http://x", *fixtures::vocab());
  EXPECT_EQ(d.actions.size(), 1u);
  ASSERT_EQ(d.diagnostics.size(), 1u);
  EXPECT_EQ(d.diagnostics[0].rfind("entry 0:", 0), 0u);

  CannedTransport junk("<html>");
  EXPECT_THROW(discover_actions(junk, "http://x", *fixtures::vocab()), TransportError);
}

TEST(Discover, UnreachableThrows) {
  HttpTransport t(std::chrono::milliseconds(500));
  EXPECT_THROW(discover_actions(t, "http://127.0.0.1:9", *fixtures::vocab()), TransportError);
}

TEST(Session, StartPromptsRequiredSlotsInOrder) {
  auto gw = hotel();
  const auto& search = gw->published().at("search").descriptor;
  auto s = start_session(search, "a");
  EXPECT_EQ(s.state, FlowState::kEliciting);
  ASSERT_EQ(s.pending_slots.size(), 4u);
  EXPECT_EQ(s.pending_slots[0].path.str(), "object.checkinTime");
  EXPECT_EQ(s.pending_slots[0].label, "checkin time");
  EXPECT_EQ(s.pending_slots[0].datatype, "Date");
  EXPECT_EQ(s.pending_slots[3].path.str(), "object.containsPlace.numChildren");

  ActionDescriptor bare = search;
  bare.inputs.clear();
  EXPECT_EQ(start_session(bare).state, FlowState::kReadyToInvoke);
}

TEST(Session, FillCoercesAndRejects) {
  auto gw = hotel();
  auto s = start_session(gw->published().at("search").descriptor);
  s = fill_slot(std::move(s), PropertyPath::parse("object.checkinTime"), "1.1.18");
  EXPECT_FALSE(s.last_error);
  auto v = get_path(s.filled, s.filled.roots()[0], PropertyPath::parse("object.checkinTime"));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(std::get<Literal>(v[0]).lexical, "2018-01-01");
  EXPECT_EQ(std::get<Literal>(v[0]).kind, LiteralKind::kDate);

  auto before = s.pending_slots.size();
  s = fill_slot(std::move(s), PropertyPath::parse("object.checkoutTime"), "abc");
  EXPECT_TRUE(s.last_error);
  EXPECT_EQ(s.state, FlowState::kEliciting);
  EXPECT_EQ(s.pending_slots.size(), before);
  EXPECT_EQ(s.transcript.back().event, "rejected");

  s = fill_slot(std::move(s), PropertyPath::parse("object.containsPlace.numAdults"), "0");
  EXPECT_TRUE(s.last_error);
  EXPECT_THROW(fill_slot(s, PropertyPath::parse("object.nope"), "1"), PathError);
}

TEST(Session, CoercionTable) {
  PropertyValueSpecification date;
  date.path = PropertyPath::parse("checkinTime");
  date.datatype = "Date";
  EXPECT_EQ(coerce_slot_value(date, "24.12.19").lexical, "2019-12-24");
  EXPECT_EQ(coerce_slot_value(date, "2019-12-24").lexical, "2019-12-24");
  EXPECT_THROW(coerce_slot_value(date, "31.2.19"), CoercionError);
  PropertyValueSpecification n;
  n.path = PropertyPath::parse("numAdults");
  n.datatype = "Integer";
  n.min_value = 1;
  EXPECT_EQ(coerce_slot_value(n, " 3 ").lexical, "3");
  EXPECT_THROW(coerce_slot_value(n, "0"), ConstraintError);
  EXPECT_THROW(coerce_slot_value(n, "2.5"), CoercionError);
}

TEST(Flow, SearchPresentsOffers) {
  auto gw = hotel();
  HttpTransport t;
  auto s = searched(*gw, t);
  ASSERT_EQ(s.state, FlowState::kPresenting) << s.last_error.value_or("");
  ASSERT_TRUE(s.last_result);
  EXPECT_EQ(s.last_result->roots().size(), 4u);
  EXPECT_EQ(s.choices.size(), 4u);
  EXPECT_EQ(s.transcript.back().text, "I found 4 items. The first 3 are: 1. Einzelzimmer, 2. Doppelzimmer, "
                                      "3. Doppelzimmer Superior.");
}

TEST(Flow, ChooseThenBuyCompletes) {
  auto gw = hotel();
  HttpTransport t;
  auto s = searched(*gw, t);
  ASSERT_EQ(s.state, FlowState::kPresenting);
  std::string label = s.choices[1].label;
  s = choose(std::move(s), 1);
  EXPECT_EQ(extract_intent(*s.current_action).name, "buy.offer");
  ASSERT_EQ(s.pending_slots.size(), 1u);
  EXPECT_EQ(s.pending_slots[0].path.str(), "object.underName.name");
  s = fill_slot(std::move(s), PropertyPath::parse("object.underName.name"), "Anna Muster");
  ASSERT_EQ(s.state, FlowState::kReadyToInvoke);
  s = invoke_current(std::move(s), t, *fixtures::vocab());
  ASSERT_EQ(s.state, FlowState::kCompleted) << s.last_error.value_or("");
  auto bookings = gw->mock().bookings();
  ASSERT_EQ(bookings.size(), 1u);
  EXPECT_EQ(bookings[0].guest, "Anna Muster");
  EXPECT_EQ(bookings[0].from, "2018-01-01");
  auto room = std::find_if(gw->mock().rooms().begin(), gw->mock().rooms().end(),
                           [&](const auto& r) { return r.id == bookings[0].room_id; });
  EXPECT_EQ(room->name, label);
  EXPECT_NE(s.transcript.back().text.find("Confirmation: C-1."), std::string::npos);
}

TEST(Flow, GatewayDownFails) {
  auto gw = hotel();
  HttpTransport t(std::chrono::milliseconds(500));
  auto d = discover_actions(t, gw->base_url(), *fixtures::vocab());
  gw->stop();
  auto s = start_session(d.actions[0]);
  for (const char* p : {"object.checkinTime", "object.checkoutTime"}) s = fill_slot(std::move(s), PropertyPath::parse(p), "1.1.18");
  s = fill_slot(std::move(s), PropertyPath::parse("object.checkoutTime"), "3.1.18");
  s = fill_slot(std::move(s), PropertyPath::parse("object.containsPlace.numAdults"), "2");
  s = fill_slot(std::move(s), PropertyPath::parse("object.containsPlace.numChildren"), "0");
  s = invoke_current(std::move(s), t, *fixtures::vocab());
  EXPECT_EQ(s.state, FlowState::kFailed);
  EXPECT_EQ(s.last_status, 0);
}

TEST(Flow, ChooseErrors) {
  auto s = new_session("e", {});
  EXPECT_THROW(choose(s, 0), IndexOutOfRange);
  auto gw = hotel();
  auto ready = start_session(gw->published().at("search").descriptor);
  EXPECT_THROW(choose(ready, 0), StateError);
  EXPECT_THROW(invoke_current(ready, *std::make_unique<HttpTransport>(), *fixtures::vocab()), StateError);
  HttpTransport t;
  auto presenting = searched(*gw, t);
  EXPECT_THROW(choose(presenting, 4), IndexOutOfRange);
  EXPECT_THROW(fill_slot(presenting, PropertyPath::parse("object.checkinTime"), "1.1.18"), StateError);
}

TEST(Intents, MatchAndSummaries) {
  auto gw = hotel();
  std::vector<ActionDescriptor> all = {gw->published().at("search").descriptor, gw->published().at("buy").descriptor};
  EXPECT_EQ(match_intent(all, "buy.offer"), 1u);
  EXPECT_EQ(match_intent(all, "search"), 0u);
  EXPECT_FALSE(match_intent(all, "reserve"));
  EXPECT_EQ(capability_summary(extract_intent(all[0])),
            "You can search lodgingbusiness given checkin time, checkout time, num adults, num children.");
}

// Random operation sequences only move along the allowed edges, and the
// Eliciting / ReadyToInvoke states agree with pendingSlots.
TEST(StateMachine, RandomSequencesStayOnAllowedEdges) {
  using S = FlowState;
  const std::set<std::pair<S, S>> allowed = {
      {S::kDiscovering, S::kEliciting},   {S::kDiscovering, S::kReadyToInvoke}, {S::kEliciting, S::kEliciting},
      {S::kEliciting, S::kReadyToInvoke}, {S::kReadyToInvoke, S::kReadyToInvoke},
      {S::kReadyToInvoke, S::kPresenting}, {S::kReadyToInvoke, S::kFailed},  {S::kPresenting, S::kEliciting},
      {S::kPresenting, S::kReadyToInvoke}, {S::kPresenting, S::kCompleted},
      {S::kReadyToInvoke, S::kCompleted},  // an invocation whose result offers nothing further
  };
  const std::vector<std::string> junk = {"abc", "-1", "", "31.2.18", "2.5"};

  auto gw = hotel();
  HttpTransport t;
  auto entry = discover_actions(t, gw->base_url(), *fixtures::vocab()).actions;
  std::mt19937 rng(5);
  // Mostly well-typed values so that runs get past the search.
  auto value_for = [&](const PropertyValueSpecification& spec) -> std::string {
    if (rng() % 5 == 0) return junk[rng() % junk.size()];
    if (spec.datatype == "Date") {
      bool out = spec.path.str().ends_with("checkoutTime");
      return std::to_string((out ? 5 : 1) + rng() % 4) + ".1.18";
    }
    if (spec.datatype == "Integer" || spec.datatype == "Number") return std::to_string(rng() % 4);
    return "Guest " + std::to_string(rng() % 100);
  };
  std::set<std::pair<S, S>> seen;
  for (int run = 0; run < 150; ++run) {
    auto s = new_session("r", entry);
    for (int step = 0; step < 30; ++step) {
      S from = s.state;
      auto bound = s.state == S::kDiscovering ? s.entry_actions.size() : s.choices.size();
      auto op = s.state == S::kReadyToInvoke && rng() % 2 ? 2u : rng() % 3;
      try {
        if (op == 0) {
          s = choose(s, rng() % (bound + 1));
        } else if (op == 1) {
          if (!s.current_action) throw StateError("no action");
          const auto& inputs = s.current_action->inputs;
          auto path = !s.pending_slots.empty() && rng() % 4 ? s.pending_slots[0].path
                                                             : inputs[rng() % inputs.size()].path;
          s = fill_slot(s, path, value_for(*s.current_action->find_input(path)));
        } else {
          s = invoke_current(s, t, *fixtures::vocab());
        }
      } catch (const Error&) {
        continue;  // rejected operations leave the caller's session as it was
      }
      ASSERT_TRUE(allowed.count({from, s.state}))
          << to_string(from) << " -> " << to_string(s.state) << " (run " << run << ", step " << step << ")";
      if (from != s.state) seen.insert({from, s.state});
      if (s.state == S::kEliciting) {
        EXPECT_FALSE(s.pending_slots.empty());
      }
      if (s.state == S::kReadyToInvoke) {
        EXPECT_TRUE(s.current_action && s.pending_slots.empty());
      }
    }
  }
  EXPECT_TRUE(seen.count({S::kReadyToInvoke, S::kPresenting}));
  EXPECT_TRUE(seen.count({S::kPresenting, S::kEliciting}));
  EXPECT_TRUE(seen.count({S::kReadyToInvoke, S::kCompleted}));
  EXPECT_TRUE(seen.count({S::kReadyToInvoke, S::kFailed}));
}

TEST(Transcript, JsonLines) {
  auto gw = hotel();
  HttpTransport t;
  auto s = searched(*gw, t);
  auto lines = transcript_jsonl(s);
  std::size_t n = 0;
  std::size_t start = 0;
  while (start < lines.size()) {
    auto end = lines.find('\n', start);
    auto rec = json::parse(lines.substr(start, end - start));
    EXPECT_TRUE(rec.contains("speaker") && rec.contains("event") && rec.contains("text"));
    ++n;
    start = end + 1;
  }
  EXPECT_EQ(n, s.transcript.size());
  auto j = session_to_json(s);
  EXPECT_EQ(j["state"], "Presenting");
  EXPECT_EQ(j["choices"].size(), 4u);
}
