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

#include <random>

#include "actions/errors.hpp"
#include "actions/vocab.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "harness.hpp"
#include "oracles.hpp"

using namespace actions;

namespace {

// Hotel -> LodgingBusiness -> LocalBusiness; p -> q -> r, s unrelated.
Vocabulary chain_vocab() {
  return Vocabulary::build({{"LocalBusiness", {}}, {"LodgingBusiness", {"LocalBusiness"}}, {"Hotel", {"LodgingBusiness"}}},
                           {{"r", {}, {}, {"Text"}},
                            {"q", {"r"}, {}, {"Text"}},
                            {"p", {"q"}, {}, {"Text"}},
                            {"s", {}, {"LodgingBusiness"}, {"Text"}}});
}

std::vector<std::string> lexicals(const Node& n, const std::string& p) {
  std::vector<std::string> out;
  auto it = n.properties.find(p);
  if (it == n.properties.end()) return out;
  for (const auto& v : it->second) out.push_back(std::get<Literal>(v).lexical);
  return out;
}

}  // namespace

TEST(VocabLoad, ThreeClassChain) {
  auto v = load_vocabulary(R"({"classes":[{"name":"LocalBusiness"},
    {"name":"LodgingBusiness","subClassOf":["LocalBusiness"]},{"name":"Hotel","subClassOf":["LodgingBusiness"]}]})");
  EXPECT_EQ(v.classes().size(), 3u);
}

TEST(VocabLoad, RejectsBadDocuments) {
  EXPECT_THROW(load_vocabulary(R"({"classes":[{"name":"A","subClassOf":["B"]},{"name":"B","subClassOf":["A"]}]})"),
               CycleError);
  EXPECT_THROW(load_vocabulary(R"({"properties":[{"name":"p","rangeIncludes":[]}]})"), FormatError);
  EXPECT_THROW(load_vocabulary(R"({"classes":[{"name":"A","subClassOf":["Missing"]}]})"), DanglingReference);
  EXPECT_THROW(load_vocabulary(R"({"classes":[{"name":"A"},{"name":"A"}]})"), FormatError);
  EXPECT_THROW(load_vocabulary("[1,2]"), FormatError);
  EXPECT_THROW(load_vocabulary("nope"), FormatError);
  EXPECT_NO_THROW(load_vocabulary(R"({"classes":[{"name":"A","subClassOf":["A"]}]})"));
}

TEST(VocabLoad, ShippedFilesCoverTheAnnotatedTerms) {
  auto v = fixtures::vocab();
  for (const char* c : {"BuyAction", "SearchAction", "ReserveAction", "Offer", "Order", "LodgingReservation",
                        "HotelRoom", "LodgingBusiness", "Event", "GeoCoordinates", "webapi:TokenAuthentication",
                        "webapi:HTTPBasicAuthentication", "webapi:CustomAuthentication"})
    EXPECT_TRUE(v->has_class(c)) << c;
  for (const char* p : {"object", "result", "target", "query", "checkinTime", "checkoutTime", "numAdults",
                        "numChildren", "confirmationNumber", "itemOffered", "isAccessibleForFree", "instrument"})
    EXPECT_TRUE(v->has_property(p)) << p;
  EXPECT_TRUE(v->is_subclass_of("HotelRoom", "Product"));
}

TEST(VocabLoad, UnknownTermsThrow) {
  auto v = chain_vocab();
  EXPECT_THROW(v.is_subclass_of("Nope", "Hotel"), UnknownTerm);
  EXPECT_THROW(v.property("nope"), UnknownTerm);
}

// One test per entailment rule.

TEST(Entailment, TypeInheritance) {
  auto v = chain_vocab();
  EntityGraph g;
  auto n = g.add_root(Node{std::nullopt, {"Hotel"}, {}});
  auto closed = entail_closure(g, v);
  EXPECT_EQ(closed.node(n).types, (std::vector<std::string>{"Hotel", "LodgingBusiness", "LocalBusiness"}));
  EXPECT_EQ(g.node(n).types.size(), 1u);
}

TEST(Entailment, SubclassTransitivity) {
  auto v = chain_vocab();
  EXPECT_TRUE(is_subclass_of(v, "Hotel", "LocalBusiness"));
  EXPECT_FALSE(is_subclass_of(v, "LocalBusiness", "Hotel"));
}

TEST(Entailment, SubclassReflexivity) {
  auto v = chain_vocab();
  EXPECT_TRUE(is_subclass_of(v, "Hotel", "Hotel"));
  EXPECT_TRUE(is_subclass_of(v, "LocalBusiness", "LocalBusiness"));
}

TEST(Entailment, SubpropertyTransitivity) {
  auto v = chain_vocab();
  EXPECT_TRUE(is_subproperty_of(v, "p", "r"));
  EXPECT_FALSE(is_subproperty_of(v, "r", "p"));
  EXPECT_FALSE(is_subproperty_of(v, "p", "s"));
}

TEST(Entailment, SubpropertyReflexivity) {
  auto v = chain_vocab();
  EXPECT_TRUE(is_subproperty_of(v, "p", "p"));
  EXPECT_TRUE(is_subproperty_of(v, "s", "s"));
}

TEST(Entailment, PropertyInheritance) {
  auto v = chain_vocab();
  EntityGraph g;
  auto n = g.add_root(Node{std::nullopt, {"Hotel"}, {}});
  g.add_value(n, "p", Literal::text("x"));
  g.add_value(n, "q", Literal::text("x"));
  auto closed = entail_closure(g, v);
  EXPECT_EQ(lexicals(closed.node(n), "p"), std::vector<std::string>{"x"});
  EXPECT_EQ(lexicals(closed.node(n), "q"), std::vector<std::string>{"x"});
  EXPECT_EQ(lexicals(closed.node(n), "r"), std::vector<std::string>{"x"});
  EXPECT_FALSE(closed.node(n).properties.count("s"));
}

TEST(Entailment, ClosureIsIdempotentAndMonotone) {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    auto raw = gen::random_vocab(rng);
    auto v = Vocabulary::build(raw.classes, raw.properties);
    auto g = gen::random_graph(rng, raw, 4);
    auto once = entail_closure(g, v);
    auto twice = entail_closure(once, v);
    EXPECT_EQ(oracle::graph_triples(once), oracle::graph_triples(twice));
    auto before = oracle::graph_triples(g);
    auto after = oracle::graph_triples(once);
    EXPECT_TRUE(std::includes(after.begin(), after.end(), before.begin(), before.end()));
  }
}

TEST(Entailment, StrictClosureRejectsUndeclaredTerms) {
  auto v = chain_vocab();
  EntityGraph g;
  auto n = g.add_root(Node{std::nullopt, {"Spaceship"}, {}});
  EXPECT_THROW(entail_closure(g, v), UnknownTerm);
  g.node(n).types = {"Hotel"};
  g.add_value(n, "warp", Literal::integer(9));
  EXPECT_THROW(entail_closure(g, v), UnknownTerm);
  EXPECT_NO_THROW(entail_closure_lenient(g, v));
}

TEST(Entailment, MatchesNaiveFixpointOnRandomGraphs) {
  auto r = harness::random_closure(20261015, 1500, 4);
  EXPECT_EQ(r.cases, 1500u);
  EXPECT_GT(r.findings, 1000u) << "entailed triples";
  EXPECT_EQ(r.mismatches, 0u) << r.first_mismatch;
}

TEST(Entailment, SubclassIsAPreorderOnRandomVocabularies) {
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    auto raw = gen::random_vocab(rng, 8, 3);
    auto v = Vocabulary::build(raw.classes, raw.properties);
    for (const auto& a : raw.classes) {
      EXPECT_TRUE(v.is_subclass_of(a.name, a.name));
      for (const auto& b : raw.classes) {
        for (const auto& c : raw.classes) {
          if (v.is_subclass_of(a.name, b.name) && v.is_subclass_of(b.name, c.name)) {
            EXPECT_TRUE(v.is_subclass_of(a.name, c.name));
          }
        }
      }
    }
  }
}

TEST(Applicability, SubclassAdmission) {
  auto v = fixtures::vocab();
  Node hotel{std::nullopt, {"Hotel"}, {}};
  EXPECT_TRUE(check_property_applicability(*v, hotel, "checkinTime"));
  Node untyped;
  EXPECT_FALSE(check_property_applicability(*v, untyped, "name"));
  Node person{std::nullopt, {"Person"}, {}};
  EXPECT_FALSE(check_property_applicability(*v, person, "checkinTime"));
  EXPECT_THROW(check_property_applicability(*v, person, "nope"), UnknownTerm);
}

TEST(Admissibility, NodesAndLiterals) {
  auto v = fixtures::vocab();
  EntityGraph g;
  auto room = g.add_node(Node{std::nullopt, {"HotelRoom"}, {}});
  auto person = g.add_node(Node{std::nullopt, {"Person"}, {}});
  auto blank = g.add_node(Node{});
  EXPECT_TRUE(check_value_admissibility(*v, g, "itemOffered", room));
  EXPECT_FALSE(check_value_admissibility(*v, g, "itemOffered", person));
  EXPECT_FALSE(check_value_admissibility(*v, g, "itemOffered", blank));
  EXPECT_TRUE(check_value_admissibility(*v, g, "numAdults", Literal::integer(2)));
  EXPECT_FALSE(check_value_admissibility(*v, g, "numAdults", Literal::number(2.5)));
  EXPECT_TRUE(check_value_admissibility(*v, g, "checkinTime", Literal::text("2018-01-01")));
  EXPECT_FALSE(check_value_admissibility(*v, g, "checkinTime", Literal::text("soon")));
  EXPECT_TRUE(check_value_admissibility(*v, g, "image", Literal::text("https://e.org/a.png")));
  EXPECT_FALSE(check_value_admissibility(*v, g, "image", Literal::text("a.png")));
}

TEST(Validation, BuyOfferAnnotationIsClean) {
  auto g = parse_graph(fixtures::text("fixtures/annotations/buy-offer-order.json"));
  auto r = validate_graph(g, *fixtures::vocab());
  EXPECT_TRUE(r.empty()) << r.to_table();
}

TEST(Validation, AllShippedGoodFixturesAreClean) {
  for (const char* f : {"hotel-actions.json", "reserve-hotelroom.json", "eventbrite-search.json", "custom-auth-search.json"}) {
    auto r = validate_graph(parse_graph(fixtures::text(std::string("fixtures/annotations/") + f)), *fixtures::vocab());
    EXPECT_TRUE(r.empty()) << f << "\n" << r.to_table();
  }
}

TEST(Validation, ClosedWorldFixturesYieldExactlyTheirCode) {
  struct Case {
    const char* file;
    ViolationCode code;
    const char* property;
  } cases[] = {{"untyped-subject.json", ViolationCode::kUntypedSubject, ""},
               {"domain-violation.json", ViolationCode::kDomainViolation, "checkinTime"},
               {"range-violation.json", ViolationCode::kRangeViolation, "organizer"}};
  for (const auto& c : cases) {
    auto r = validate_graph(parse_graph(fixtures::text(std::string("fixtures/annotations/") + c.file)), *fixtures::vocab());
    ASSERT_EQ(r.violations.size(), 1u) << c.file << "\n" << r.to_table();
    EXPECT_EQ(r.violations[0].code, c.code) << c.file;
    EXPECT_EQ(r.violations[0].property, c.property) << c.file;
  }
}

TEST(Validation, QueryOnOrderIsOneDomainViolation) {
  auto g = parse_graph(R"({"@type":"Order","query":"music"})");
  auto r = validate_graph(g, *fixtures::vocab());
  ASSERT_EQ(r.violations.size(), 1u) << r.to_table();
  EXPECT_EQ(r.violations[0].code, ViolationCode::kDomainViolation);
}

TEST(Validation, UnknownTermsAreReportedNotThrown) {
  auto g = parse_graph(R"({"@type":"Spaceship","warp":9})");
  auto r = validate_graph(g, *fixtures::vocab());
  EXPECT_EQ(r.count(ViolationCode::kUnknownType), 1u);
  EXPECT_EQ(r.count(ViolationCode::kUnknownProperty), 1u);
  EXPECT_EQ(r.violations.size(), 2u) << r.to_table();
}

TEST(Validation, ViolationsFollowTraversalOrder) {
  auto g = parse_graph(R"({"@type":"Event","name":"x","organizer":{"@type":"Offer","query":"q"},
                           "startDate":"soon"})");
  auto v = fixtures::vocab();
  auto r = validate_graph(g, *v);
  auto order = g.traversal_order();
  std::size_t last = 0;
  for (const auto& viol : r.violations) {
    ASSERT_TRUE(viol.node);
    auto pos = static_cast<std::size_t>(std::find(order.begin(), order.end(), *viol.node) - order.begin());
    EXPECT_GE(pos, last);
    last = pos;
  }
  EXPECT_EQ(r.violations.size(), 3u) << r.to_table();
  auto again = validate_graph(g, *v);
  EXPECT_EQ(again.to_json(), r.to_json());
}

TEST(Validation, OutOfDomainAdditionAddsExactlyOneViolation) {
  // Holds for properties without superproperties; with superproperties the
  // inherited copies are checked too.
  auto v = fixtures::vocab();
  std::vector<std::string> plain;
  for (const auto& [name, def] : v->properties()) {
    if (v->superproperties(name).size() == 1 && !def.domain_includes.empty()) plain.push_back(name);
  }
  int checked = 0;
  for (const char* doc : {R"({"@type":"Person","name":"A"})", R"({"@type":"Offer","price":3})",
                          R"({"@type":"Event","name":"E"})", R"({"@type":"Hotel","name":"H"})"}) {
    auto g = parse_graph(doc);
    ASSERT_TRUE(validate_graph(g, *v).empty());
    const auto& node = g.node(g.roots()[0]);
    auto closed = entail_closure(g, *v);
    for (const auto& p : plain) {
      if (check_property_applicability(*v, closed.node(g.roots()[0]), p)) continue;
      auto with = g;
      with.add_value(g.roots()[0], p, Literal::text("x"));
      auto r = validate_graph(with, *v);
      EXPECT_EQ(r.count(ViolationCode::kDomainViolation), 1u) << node.types[0] << "." << p << "\n" << r.to_table();
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(Validation, ExhaustiveOracleOnFiveClassFixture) {
  auto r = harness::exhaustive_validation(3);
  EXPECT_EQ(r.cases, 4526u);
  EXPECT_GT(r.findings, 5000u);
  EXPECT_EQ(r.mismatches, 0u) << r.first_mismatch;
}

TEST(Validation, RandomGraphsMatchOracle) {
  auto r = harness::random_validation(77, 800, 5);
  EXPECT_GT(r.findings, 500u);
  EXPECT_EQ(r.mismatches, 0u) << r.first_mismatch;
}
