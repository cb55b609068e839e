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

#include "common/error.hpp"

namespace prioport {

const char* errc_token(Errc c) {
  switch (c) {
    case Errc::ok: return "ok";
    case Errc::payload_too_large: return "payload-too-large";
    case Errc::bad_magic: return "bad-magic";
    case Errc::unknown_version: return "unknown-version";
    case Errc::unknown_type: return "unknown-type";
    case Errc::truncated: return "truncated";
    case Errc::version_mismatch: return "version-mismatch";
    case Errc::role_rejected: return "role-rejected";
    case Errc::timeout: return "timeout";
    case Errc::malformed_name: return "malformed-name";
    case Errc::name_already_registered: return "name-already-registered";
    case Errc::not_found: return "not-found";
    case Errc::server_unreachable: return "server-unreachable";
    case Errc::bind_failure: return "bind-failure";
    case Errc::lookup_failure: return "lookup-failure";
    case Errc::handshake_failure: return "handshake-failure";
    case Errc::carrier_unsupported: return "carrier-unsupported";
    case Errc::no_such_channel: return "no-such-channel";
    case Errc::invalid_priority: return "invalid-priority-for-policy";
    case Errc::os_refused: return "os-refused";
    case Errc::syntax_error: return "syntax-error";
    case Errc::unknown_verb: return "unknown-verb";
    case Errc::unknown_property: return "unknown-property";
    case Errc::unknown_host: return "unknown-host";
    case Errc::channel_down: return "channel-down";
    case Errc::zero_acks: return "zero-acks";
    case Errc::empty_sample_set: return "empty-sample-set";
    case Errc::cannot_sustain: return "cannot-sustain";
    case Errc::port_closed: return "port-closed";
    case Errc::io_error: return "io-error";
    case Errc::usage: return "usage";
    case Errc::no_memory: return "no-memory";
  }
  return "unknown";
}

std::optional<Errc> errc_from_token(std::string_view token) {
  for (int i = 0; i <= static_cast<int>(Errc::no_memory); ++i) {
    auto code = static_cast<Errc>(i);
    if (token == errc_token(code)) return code;
  }
  return std::nullopt;
}

}  // namespace prioport
