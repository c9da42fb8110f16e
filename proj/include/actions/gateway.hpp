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

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "actions/agent.hpp"
#include "actions/mapping.hpp"
#include "json.hpp"

namespace actions {

// In-memory hotel backend standing in for the native booking API. Rooms are
// a fixture; bookings are check-then-insert under one lock.
class MockInventory {
 public:
  struct Room {
    std::string id;
    std::string name;
    double price_per_night = 0;
    int max_adults = 1;
  };
  struct Booking {
    std::string confirmation;
    std::string room_id;
    std::string from;
    std::string to;
    std::string guest;
  };
  struct Reply {
    int status = 200;
    nlohmann::json body;
  };

  MockInventory();
  explicit MockInventory(std::vector<Room> rooms);

  Reply search(const std::string& from, const std::string& to, long adults, long children) const;
  Reply book(const std::string& room_id, const std::string& from, const std::string& to, const std::string& guest);

  const std::vector<Room>& rooms() const { return rooms_; }
  std::vector<Booking> bookings() const;
  std::size_t request_count() const { return requests_.load(); }
  void count_request() { ++requests_; }
  // Fault injection: book replies without its confirmation field.
  void set_omit_confirmation(bool on) { omit_confirmation_ = on; }

 private:
  std::vector<Room> rooms_;
  mutable std::mutex mu_;
  std::vector<Booking> bookings_;
  std::size_t next_confirmation_ = 1;
  std::atomic<std::size_t> requests_{0};
  std::atomic<bool> omit_confirmation_{false};
};

/// Sends \p req over plain HTTP. status 0 means no response.
HttpResult execute_native(const NativeRequest& req, std::chrono::milliseconds timeout = std::chrono::seconds(10));

struct GatewayConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  // Empty: the mapping's backendBaseUrl. "self": the bundled /mock backend.
  std::string backend;
  // resourceId -> token for token/basic resources. Without one, the
  // caller's Authorization header is passed through.
  std::map<std::string, std::string> credentials;
  std::vector<std::string> cors_origins;  // "*" allows any origin
  std::string console_dir;                // served under /console when set
};

struct Invocation {
  int http_status = 200;
  nlohmann::ordered_json envelope;
};

class Gateway {
 public:
  Gateway(MappingDocument mapping, GatewayConfig config);
  ~Gateway();
  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  /// Binds the listening socket and returns the port. Throws TransportError.
  int bind();
  /// Serves until stop(); bind() must have succeeded.
  void listen();
  /// bind() plus listen() on a background thread.
  void start();
  void stop();

  std::string base_url() const;
  const MappingDocument& published() const;
  std::string entry_document() const;
  Invocation handle_invocation(std::string_view resource_id, std::string_view body,
                               const std::optional<std::string>& authorization);
  MockInventory& mock();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace actions
