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
#include <string_view>

#include "common/error.hpp"
#include "qos/priority.hpp"
#include "qos/sched.hpp"
#include "qos/sexpr.hpp"

namespace prioport::qos {

// Administrative property commands, e.g.
//
//   prop set /subscriber1 (sched ((policy SCHED_FIFO) (priority 30)))
//   prop set /subscriber1 (qos ((priority HIGH)))
//   prop set /subscriber1 (qlen 128)
//   prop get /subscriber1
//
// Whitespace (including newlines) is insignificant between tokens.

enum class AdminVerb : uint8_t { PropSet, PropGet };

struct AdminRequest {
  AdminVerb verb = AdminVerb::PropGet;
  std::string target_peer;
  Sexpr property = Sexpr::list({});  // (key ...) for PropSet, empty for PropGet

  bool operator==(const AdminRequest&) const = default;
};

// Throws Error with syntax_error (position included), unknown_verb or
// unknown_property.
AdminRequest parse_admin_command(std::string_view text);

// Canonical form; parse_admin_command(render_admin_request(r)) == r for every
// well-formed request.
std::string render_admin_request(const AdminRequest& r);

// Typed views of a PropSet property payload. Each throws syntax_error when
// the tree does not have the expected shape.
struct ParsedSched {
  SchedPolicy policy = SchedPolicy::Other;
  int priority = 0;
};
ParsedSched sched_from_property(const Sexpr& property);
PriorityClass qos_from_property(const Sexpr& property);
size_t qlen_from_property(const Sexpr& property);

// Reply side. Set replies are "ok", "ok (degraded \"reason\")" or
// "err <reason>"; get replies carry the channel's sched, qos and counters in
// the same parenthesized syntax.
struct ChannelReport {
  SchedulingProperties sched;
  PriorityClass packet_priority = PriorityClass::Normal;
  uint64_t enqueued = 0;
  uint64_t sent = 0;
  uint64_t received = 0;
  uint64_t dropped = 0;
  uint64_t acks = 0;
  uint64_t queued = 0;
  std::string status = "active";
};

std::string render_set_reply(const std::string& degraded_reason);
std::string render_err_reply(Errc code);
std::string render_get_reply(const ChannelReport& report);

}  // namespace prioport::qos
