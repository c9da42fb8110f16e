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

#include <stdexcept>
#include <string>

namespace actions {

// Base of every error raised by the library. `kind()` is the stable
// machine-readable name used in diagnostics and JSON output.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define ACTIONS_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

// graph
ACTIONS_DEFINE_ERROR(SyntaxError);
ACTIONS_DEFINE_ERROR(UnsupportedFeature);
ACTIONS_DEFINE_ERROR(ContextError);
ACTIONS_DEFINE_ERROR(PathError);
ACTIONS_DEFINE_ERROR(PathConflict);

// vocab
ACTIONS_DEFINE_ERROR(FormatError);
ACTIONS_DEFINE_ERROR(DanglingReference);
ACTIONS_DEFINE_ERROR(CycleError);
ACTIONS_DEFINE_ERROR(UnknownTerm);

// action
ACTIONS_DEFINE_ERROR(NotAnAction);
ACTIONS_DEFINE_ERROR(MissingTarget);
ACTIONS_DEFINE_ERROR(MalformedSpec);
ACTIONS_DEFINE_ERROR(ConflictingSpecs);

// mapping
ACTIONS_DEFINE_ERROR(UnresolvedActionRef);
ACTIONS_DEFINE_ERROR(DescriptorInvalid);
ACTIONS_DEFINE_ERROR(MissingPathValue);
ACTIONS_DEFINE_ERROR(NativeParseError);
ACTIONS_DEFINE_ERROR(MissingCredentials);

// agent / transport
ACTIONS_DEFINE_ERROR(StateError);
ACTIONS_DEFINE_ERROR(IndexOutOfRange);
ACTIONS_DEFINE_ERROR(TransportError);
ACTIONS_DEFINE_ERROR(CoercionError);
ACTIONS_DEFINE_ERROR(ConstraintError);

#undef ACTIONS_DEFINE_ERROR

}  // namespace actions
