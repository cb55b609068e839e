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

#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "name_server/registry.hpp"
#include "net/line_reader.hpp"
#include "net/socket.hpp"

namespace prioport::ns {

inline constexpr const char* kNameServerEnv = "PRIOPORT_NAMESERVER";
inline constexpr const char* kDefaultNameServerHost = "127.0.0.1";
inline constexpr uint16_t kDefaultNameServerPort = 10000;

// "host:port" -> pair. Throws Error{usage} on malformed input.
std::pair<std::string, uint16_t> parse_hostport(const std::string& text);

// Blocking client over one persistent TCP connection, usable from any
// thread. Connects lazily; a failed exchange reconnects once before
// reporting Error{server_unreachable}.
class NameClient {
 public:
  NameClient(std::string host, uint16_t port);

  // PRIOPORT_NAMESERVER if set, else 127.0.0.1:10000. An explicit override
  // (a --nameserver flag) takes precedence over both.
  static NameClient from_env(const std::string& override_hostport = "");

  const std::string& server_host() const { return host_; }
  uint16_t server_port() const { return port_; }

  // Throws Error{malformed_name} / Error{name_already_registered}.
  void register_name(const std::string& name, const EndpointTriplet& endpoint);
  // Throws Error{not_found} when absent.
  EndpointTriplet lookup(const std::string& name);
  // nullopt when absent; still throws on transport failure.
  std::optional<EndpointTriplet> try_lookup(const std::string& name);
  // Idempotent.
  void unregister(const std::string& name);
  std::vector<std::pair<std::string, EndpointTriplet>> list();

  // Drops the persistent connection; the next operation reconnects.
  void close();

 private:
  // Sends one command line, returns the reply lines (1 + extra for LIST).
  std::vector<std::string> exchange(const std::string& line, bool multi);
  void connect_locked();
  [[noreturn]] static void throw_reply_error(const std::string& reply);

  std::string host_;
  uint16_t port_;
  std::mutex mu_;
  net::Fd conn_;
  std::optional<net::LineReader> reader_;
};

}  // namespace prioport::ns
