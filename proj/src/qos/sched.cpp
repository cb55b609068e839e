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

#include "qos/sched.hpp"

#include <pthread.h>
#include <sched.h>

#include <cerrno>
#include <cstring>

#include "common/error.hpp"

namespace prioport::qos {

void validate_sched(SchedPolicy policy, int priority) {
  if (policy == SchedPolicy::Other) {
    if (priority != 0) {
      raise(Errc::invalid_priority, "SCHED_OTHER requires priority 0");
    }
    return;
  }
  if (priority < 1 || priority > 99) {
    raise(Errc::invalid_priority,
          "real-time policies require priority in 1..99");
  }
}

int sched_weight(const SchedulingProperties& s) {
  return s.policy == SchedPolicy::Other ? 0 : s.priority;
}

std::string_view sched_policy_name(SchedPolicy p) {
  switch (p) {
    case SchedPolicy::Other: return "SCHED_OTHER";
    case SchedPolicy::Fifo: return "SCHED_FIFO";
    case SchedPolicy::Rr: return "SCHED_RR";
  }
  return "SCHED_OTHER";
}

std::optional<SchedPolicy> parse_sched_policy(std::string_view token) {
  if (token == "SCHED_OTHER" || token == "OTHER") return SchedPolicy::Other;
  if (token == "SCHED_FIFO" || token == "FIFO") return SchedPolicy::Fifo;
  if (token == "SCHED_RR" || token == "RR") return SchedPolicy::Rr;
  return std::nullopt;
}

namespace {

class PthreadSchedApplier final : public SchedApplier {
 public:
  std::string apply(std::thread::native_handle_type handle, SchedPolicy policy,
                    int priority) override {
    int os_policy = SCHED_OTHER;
    switch (policy) {
      case SchedPolicy::Other: os_policy = SCHED_OTHER; break;
      case SchedPolicy::Fifo: os_policy = SCHED_FIFO; break;
      case SchedPolicy::Rr: os_policy = SCHED_RR; break;
    }
    sched_param param{};
    param.sched_priority = policy == SchedPolicy::Other ? 0 : priority;
    const int rc = pthread_setschedparam(handle, os_policy, &param);
    if (rc == 0) return {};
    if (rc == EPERM) return "permission";
    return std::strerror(rc);
  }
};

}  // namespace

SchedApplier& system_sched_applier() {
  static PthreadSchedApplier applier;
  return applier;
}

}  // namespace prioport::qos
