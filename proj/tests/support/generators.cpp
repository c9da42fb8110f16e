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

#include "generators.hpp"

#include <algorithm>

namespace gen {

using actions::EntityGraph;
using actions::Literal;
using actions::Node;
using actions::NodeRef;
using actions::Value;
using nlohmann::json;

namespace {

int pick(std::mt19937& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
bool coin(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }

const char* const kRanges[] = {"Text", "Integer", "Number", "URL", "Date", "Boolean"};

Literal random_literal(std::mt19937& rng) {
  switch (pick(rng, 6)) {
    case 0: return Literal::text("hello");
    case 1: return Literal::integer(pick(rng, 5));
    case 2: return Literal::number(2.5);
    case 3: return Literal::text("https://example.org/x");
    case 4: return Literal::text("2018-01-01");
    default: return Literal::boolean(coin(rng, 0.5));
  }
}

}  // namespace

RawVocab random_vocab(std::mt19937& rng, int n_classes, int n_properties) {
  RawVocab v;
  for (int i = 0; i < n_classes; ++i) {
    actions::ClassDef c{"C" + std::to_string(i), {}};
    for (int j = 0; j < i; ++j) {
      if (coin(rng, 0.3)) c.sub_class_of.push_back("C" + std::to_string(j));
    }
    v.classes.push_back(std::move(c));
  }
  for (int i = 0; i < n_properties; ++i) {
    actions::PropertyDef p{"p" + std::to_string(i), {}, {}, {}};
    for (int j = 0; j < i; ++j) {
      if (coin(rng, 0.35)) p.sub_property_of.push_back("p" + std::to_string(j));
    }
    for (int c = 0; c < n_classes; ++c) {
      if (coin(rng, 0.25)) p.domain_includes.push_back("C" + std::to_string(c));
    }
    if (coin(rng, 0.5)) p.range_includes.push_back("C" + std::to_string(pick(rng, n_classes)));
    if (p.range_includes.empty() || coin(rng, 0.4)) p.range_includes.push_back(kRanges[pick(rng, 6)]);
    v.properties.push_back(std::move(p));
  }
  // Declaration order must not matter.
  std::shuffle(v.classes.begin(), v.classes.end(), rng);
  std::shuffle(v.properties.begin(), v.properties.end(), rng);
  return v;
}

EntityGraph random_graph(std::mt19937& rng, const RawVocab& vocab, int max_nodes) {
  EntityGraph g;
  int n = 1 + pick(rng, max_nodes);
  for (int i = 0; i < n; ++i) {
    Node node;
    if (coin(rng, 0.5)) node.id = "urn:n" + std::to_string(i);
    int types = pick(rng, 3);
    for (int t = 0; t < types; ++t) {
      const auto& name = vocab.classes[static_cast<std::size_t>(pick(rng, static_cast<int>(vocab.classes.size())))].name;
      if (std::find(node.types.begin(), node.types.end(), name) == node.types.end()) node.types.push_back(name);
    }
    g.add_root(std::move(node));
  }
  for (int i = 0; i < n; ++i) {
    int assertions = pick(rng, 4);
    for (int a = 0; a < assertions; ++a) {
      const auto& p = vocab.properties[static_cast<std::size_t>(pick(rng, static_cast<int>(vocab.properties.size())))].name;
      Value v = coin(rng, 0.5) ? Value{NodeRef{static_cast<std::size_t>(pick(rng, n))}} : Value{random_literal(rng)};
      auto& slot = g.node(NodeRef{static_cast<std::size_t>(i)}).properties[p];
      if (std::find(slot.begin(), slot.end(), v) == slot.end()) slot.push_back(v);
    }
  }
  return g;
}

namespace {

const char* const kProps[] = {"name", "object", "result", "agent", "price", "url", "itemOffered", "webapi:token"};
const char* const kTypes[] = {"Offer", "Order", "Person", "schema:Place", "http://schema.org/Hotel", "webapi:X"};

json random_scalar(std::mt19937& rng) {
  switch (pick(rng, 6)) {
    case 0: return "text " + std::to_string(pick(rng, 100));
    case 1: return pick(rng, 1000) - 500;
    case 2: return 0.25 * pick(rng, 40);
    case 3: return coin(rng, 0.5);
    case 4: return "https://example.org/" + std::to_string(pick(rng, 9));
    default: return "ümläut \"quoted\"";
  }
}

json random_object(std::mt19937& rng, int depth, std::vector<std::string>& ids) {
  json obj = json::object();
  if (coin(rng, 0.4)) {
    if (!ids.empty() && coin(rng, 0.3)) {
      return json{{"@id", ids[static_cast<std::size_t>(pick(rng, static_cast<int>(ids.size())))]}};
    }
    ids.push_back("urn:x:" + std::to_string(ids.size()));
    obj["@id"] = ids.back();
  }
  if (coin(rng, 0.8)) {
    if (coin(rng, 0.3)) {
      obj["@type"] = json::array({kTypes[pick(rng, 6)], kTypes[pick(rng, 6)]});
      if (obj["@type"][0] == obj["@type"][1]) obj["@type"].erase(1);
    } else {
      obj["@type"] = kTypes[pick(rng, 6)];
    }
  }
  int props = pick(rng, 4);
  for (int i = 0; i < props; ++i) {
    std::string key = kProps[pick(rng, 8)];
    if (obj.contains(key)) continue;
    int shape = depth > 0 ? pick(rng, 3) : 0;
    if (shape == 0) {
      obj[key] = random_scalar(rng);
    } else if (shape == 1) {
      obj[key] = random_object(rng, depth - 1, ids);
    } else {
      json arr = json::array();
      int n = 1 + pick(rng, 3);
      for (int k = 0; k < n; ++k)
        arr.push_back(coin(rng, 0.5) ? random_scalar(rng) : random_object(rng, depth - 1, ids));
      obj[key] = std::move(arr);
    }
  }
  return obj;
}

}  // namespace

json random_document(std::mt19937& rng, int depth) {
  std::vector<std::string> ids;
  json ctx = json::object({{"@vocab", "http://schema.org/"}, {"webapi", "https://actions.semantify.it/vocab/"}});
  if (coin(rng, 0.5)) {
    json doc = random_object(rng, depth, ids);
    if (doc.size() == 1 && doc.contains("@id")) doc["name"] = "x";
    doc["@context"] = ctx;
    return doc;
  }
  json arr = json::array();
  int n = 1 + pick(rng, 3);
  for (int i = 0; i < n; ++i) {
    json doc = random_object(rng, depth, ids);
    if (doc.size() == 1 && doc.contains("@id")) doc["name"] = "x";
    doc["@context"] = ctx;
    arr.push_back(std::move(doc));
  }
  return arr;
}

}  // namespace gen
