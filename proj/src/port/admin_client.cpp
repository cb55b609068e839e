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

#include "port/admin_client.hpp"

#include "common/clock.hpp"
#include "common/error.hpp"
#include "name_server/client.hpp"
#include "wire/frame_io.hpp"
#include "wire/handshake.hpp"

namespace prioport::port {

AdminSession::AdminSession(const std::string& host, uint16_t port,
                           const std::string& source_name) {
  conn_ = net::tcp_connect(host, port);
  wire::HandshakeInfo info;
  info.role = wire::SessionRole::Admin;
  info.source_port = source_name;
  wire::handshake_initiate(conn_, info);
}

AdminSession AdminSession::open(const std::string& target,
                                const std::string& nameserver_override,
                                const std::string& source_name) {
  auto client = ns::NameClient::from_env(nameserver_override);
  const ns::EndpointTriplet endpoint = client.lookup(target);
  return AdminSession(endpoint.host, endpoint.port, source_name);
}

std::string AdminSession::request(const std::string& text, int timeout_ms) {
  wire::Frame f;
  f.type = wire::FrameType::AdminRequest;
  f.message_id = next_id_++;
  f.timestamp_ns = mono_ns();
  f.payload.assign(text.begin(), text.end());
  wire::send_frame(conn_, f);
  for (;;) {
    if (!net::poll_readable(conn_, timeout_ms)) {
      raise(Errc::timeout, "no admin reply within timeout");
    }
    auto reply = wire::recv_frame(conn_);
    if (!reply) raise(Errc::io_error, "admin session closed by peer");
    if (reply->type != wire::FrameType::AdminReply ||
        reply->message_id != f.message_id) {
      continue;
    }
    return std::string(reply->payload.begin(), reply->payload.end());
  }
}

}  // namespace prioport::port
