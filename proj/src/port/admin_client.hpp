/*
 * Copyright (C) 2026 The prioport authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <string>

#include "net/socket.hpp"

namespace prioport::port {

// One administrative session against a remote port: a stream connection
// with an admin-role handshake, then request/reply text in framed payloads.
class AdminSession {
 public:
  // Direct endpoint. Throws Error{handshake_failure} and friends.
  AdminSession(const std::string& host, uint16_t port,
               const std::string& source_name = "/admin");
  // Resolves target via the name server (override > environment > default).
  static AdminSession open(const std::string& target,
                           const std::string& nameserver_override = "",
                           const std::string& source_name = "/admin");

  // Sends one command, waits for its reply. Throws Error{timeout} /
  // Error{io_error}.
  std::string request(const std::string& text, int timeout_ms = 5000);

 private:
  net::Fd conn_;
  uint64_t next_id_ = 1;
};

}  // namespace prioport::port
