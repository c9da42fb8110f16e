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

// Seeded generators for property tests. Every generator takes the engine by
// reference so a failing case can be replayed from its seed.

#pragma once

#include <random>
#include <string>
#include <vector>

#include "actions/graph.hpp"
#include "actions/vocab.hpp"
#include "json.hpp"

namespace gen {

struct RawVocab {
  std::vector<actions::ClassDef> classes;
  std::vector<actions::PropertyDef> properties;
};

// Classes C0..C{n-1} and properties p0..p{m-1}; parents always have a lower
// index, so both hierarchies are DAGs.
RawVocab random_vocab(std::mt19937& rng, int n_classes = 6, int n_properties = 5);

// Up to max_nodes nodes over the terms of vocab, every node a root.
actions::EntityGraph random_graph(std::mt19937& rng, const RawVocab& vocab, int max_nodes = 4);

// A JSON-LD document made of nested objects, shared @id references,
// arrays and scalars, using the given property and type names.
nlohmann::json random_document(std::mt19937& rng, int depth = 3);

}  // namespace gen
