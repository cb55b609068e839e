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

#include <atomic>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "name_server/registry.hpp"
#include "net/socket.hpp"

namespace prioport::ns {

// TCP text-protocol front end of the registry. One request per line:
//
//   REGISTER <name> <host> <port> <carrier>  ->  OK | ERR <reason>
//   QUERY <name>                             ->  OK <host> <port> <carrier>
//                                            |   ERR not-found
//   UNREGISTER <name>                        ->  OK
//   LIST                                     ->  OK <n>  then n entry lines
//
// Connections are persistent: a client may issue any number of commands.
class NameServer {
 public:
  // Binds immediately; port 0 picks an ephemeral port. Throws
  // Error{bind_failure}.
  NameServer(const std::string& host, uint16_t port);
  ~NameServer();

  NameServer(const NameServer&) = delete;
  NameServer& operator=(const NameServer&) = delete;

  const std::string& host() const { return host_; }
  uint16_t port() const { return port_; }

  Registry& registry() { return registry_; }

  void stop();

 private:
  void accept_loop();
  void serve_connection(net::Fd conn);
  std::string handle_line(const std::string& line);

  std::string host_;
  uint16_t port_ = 0;
  net::Fd listener_;
  Registry registry_;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  // Workers erase their fd from conns_ under the mutex before closing it, so
  // stop() never shuts down a recycled descriptor.
  std::mutex workers_mu_;
  std::vector<std::thread> workers_;
  std::unordered_set<int> conns_;
};

}  // namespace prioport::ns
