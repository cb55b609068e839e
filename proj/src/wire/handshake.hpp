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
#include <map>
#include <string>

#include "net/socket.hpp"
#include "wire/frame.hpp"

namespace prioport::wire {

enum class SessionRole : uint8_t { Data, Admin };

const char* session_role_name(SessionRole role);
SessionRole parse_session_role(const std::string& text);

// One HANDSHAKE frame each way over the destination port's stream listener.
// The payload is self-describing "key=value" lines. The initiator announces
// version, role, source port name and requested carrier; carrier-specific
// keys ride along (the initiator's datagram port for udp, virtual host and
// world token for emu, the allocated flow id). The acceptor answers with
// status=ok plus its own carrier keys, or status=<error token> followed by
// connection close.
struct HandshakeInfo {
  int protocol_version = kProtocolVersion;
  SessionRole role = SessionRole::Data;
  std::string source_port;             // initiator's port name
  std::string carrier = "tcp";
  std::map<std::string, std::string> extra;  // carrier-specific keys

  bool operator==(const HandshakeInfo&) const = default;
};

std::map<std::string, std::string> parse_kv_payload(
    const std::vector<uint8_t>& payload);
std::vector<uint8_t> render_kv_payload(
    const std::map<std::string, std::string>& kv);

Frame make_handshake_frame(const HandshakeInfo& info);
HandshakeInfo parse_handshake_frame(const Frame& f);

// Initiator side: sends info, waits for the acceptor's reply. Throws
// Error{version_mismatch} / Error{role_rejected} / Error{handshake_failure}
// as reported by the acceptor, Error{timeout} when no reply arrives within
// timeout_ms.
std::map<std::string, std::string> handshake_initiate(
    const net::Fd& fd, const HandshakeInfo& info, int timeout_ms = 5000);

// Acceptor side, step 1: reads the initiator's announcement. Throws
// Error{timeout} / Error{handshake_failure}.
HandshakeInfo handshake_read(const net::Fd& fd, int timeout_ms = 5000);
// Acceptor side, step 2: answer. Empty error_token means acceptance.
void handshake_reply(const net::Fd& fd, const std::string& error_token,
                     const std::map<std::string, std::string>& reply_keys = {});

}  // namespace prioport::wire
