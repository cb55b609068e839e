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
#include <string>
#include <string_view>
#include <thread>

namespace prioport::qos {

enum class SchedPolicy : uint8_t {
  Other,  // default time-sharing
  Fifo,   // real-time first-in-first-out
  Rr,     // real-time round-robin
};

struct SchedulingProperties {
  SchedPolicy policy = SchedPolicy::Other;
  int priority = 0;  // 0 for Other, 1..99 for real-time policies
  bool applied = true;
  std::string degraded_reason;  // non-empty iff the OS refused the request

  bool operator==(const SchedulingProperties&) const = default;
};

// Throws Error{invalid_priority} when the priority is outside the policy's
// range (Other: exactly 0; Fifo/Rr: 1..99).
void validate_sched(SchedPolicy policy, int priority);

// Drain-order weight used by the emulated carrier so prioritization tests do
// not depend on OS scheduling privileges. Other maps to 0, the real-time
// policies map to their priority value.
int sched_weight(const SchedulingProperties& s);

std::string_view sched_policy_name(SchedPolicy p);  // SCHED_FIFO etc.
std::optional<SchedPolicy> parse_sched_policy(std::string_view token);

// Applies scheduling properties to a live thread. Injectable so the degraded
// path can be exercised without dropping privileges.
class SchedApplier {
 public:
  virtual ~SchedApplier() = default;

  // Empty string on success, otherwise a short refusal reason ("permission").
  virtual std::string apply(std::thread::native_handle_type handle,
                            SchedPolicy policy, int priority) = 0;
};

// pthread-backed applier.
SchedApplier& system_sched_applier();

}  // namespace prioport::qos
