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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace prioport {

// Error codes shared by the C++ core and the C API. The C API reports the
// negated value (see include/prioport.h), so the numeric order here is ABI.
enum class Errc : int {
  ok = 0,
  payload_too_large = 1,
  bad_magic = 2,
  unknown_version = 3,
  unknown_type = 4,
  truncated = 5,
  version_mismatch = 6,
  role_rejected = 7,
  timeout = 8,
  malformed_name = 9,
  name_already_registered = 10,
  not_found = 11,
  server_unreachable = 12,
  bind_failure = 13,
  lookup_failure = 14,
  handshake_failure = 15,
  carrier_unsupported = 16,
  no_such_channel = 17,
  invalid_priority = 18,
  os_refused = 19,
  syntax_error = 20,
  unknown_verb = 21,
  unknown_property = 22,
  unknown_host = 23,
  channel_down = 24,
  zero_acks = 25,
  empty_sample_set = 26,
  cannot_sustain = 27,
  port_closed = 28,
  io_error = 29,
  usage = 30,
  no_memory = 31,
};

// Stable lowercase-hyphen token for an error code ("no-such-channel").
const char* errc_token(Errc c);

// Inverse of errc_token; nullopt for unrecognized tokens.
std::optional<Errc> errc_from_token(std::string_view token);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace prioport
