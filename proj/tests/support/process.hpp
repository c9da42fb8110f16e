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

#include <chrono>
#include <string>
#include <sys/types.h>
#include <vector>

namespace testproc {

struct Result {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs argv[0] with the given arguments and waits for it.
Result run(const std::vector<std::string>& argv, const std::string& input = {},
           std::chrono::milliseconds timeout = std::chrono::seconds(20));

// A background process (used for "actionctl serve"). Killed on destruction.
class Child {
 public:
  explicit Child(const std::vector<std::string>& argv);
  ~Child();
  Child(const Child&) = delete;
  Child& operator=(const Child&) = delete;

  // Reads stdout until a line containing needle appears. Returns the line,
  // or an empty string on timeout or exit.
  std::string wait_for_line(const std::string& needle, std::chrono::milliseconds timeout);
  int terminate();  // SIGTERM, then waits; returns the exit status

 private:
  pid_t pid_ = -1;
  int out_fd_ = -1;
  std::string buffered_;
};

int free_port();

std::string read_file(const std::string& path);
std::string temp_path(const std::string& stem);

}  // namespace testproc
