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

#pragma once

#include <memory>
#include <string>

#include "actions/vocab.hpp"
#include "process.hpp"

namespace fixtures {

inline std::string source(const std::string& rel) { return std::string(ACTIONS_SOURCE_DIR) + "/" + rel; }

inline std::string text(const std::string& rel) { return testproc::read_file(source(rel)); }

inline std::string actionctl() { return ACTIONCTL_PATH; }

// The shipped vocabulary, loaded once.
inline std::shared_ptr<const actions::Vocabulary> vocab() {
  static auto v = std::make_shared<const actions::Vocabulary>(
      actions::load_vocabulary_paths({source("vocab")}));
  return v;
}

}  // namespace fixtures
