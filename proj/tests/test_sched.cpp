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

#include <doctest.h>

#include "common/error.hpp"
#include "qos/sched.hpp"

using namespace prioport;
using namespace prioport::qos;

TEST_CASE("priority ranges are enforced per policy") {
  CHECK_NOTHROW(validate_sched(SchedPolicy::Other, 0));
  CHECK_THROWS_AS(validate_sched(SchedPolicy::Other, 5), Error);
  for (int p : {1, 30, 99}) {
    CHECK_NOTHROW(validate_sched(SchedPolicy::Fifo, p));
    CHECK_NOTHROW(validate_sched(SchedPolicy::Rr, p));
  }
  for (int p : {0, -1, 100, 200}) {
    CHECK_THROWS_AS(validate_sched(SchedPolicy::Fifo, p), Error);
    CHECK_THROWS_AS(validate_sched(SchedPolicy::Rr, p), Error);
  }
  try {
    validate_sched(SchedPolicy::Fifo, 200);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_priority);
  }
}

TEST_CASE("drain-order weight follows the real-time priority") {
  auto props = [](SchedPolicy policy, int priority) {
    SchedulingProperties s;
    s.policy = policy;
    s.priority = priority;
    return s;
  };
  CHECK(sched_weight(props(SchedPolicy::Other, 0)) == 0);
  CHECK(sched_weight(props(SchedPolicy::Fifo, 30)) == 30);
  CHECK(sched_weight(props(SchedPolicy::Rr, 99)) == 99);
}

TEST_CASE("policy names parse with or without their prefix") {
  CHECK(sched_policy_name(SchedPolicy::Fifo) == "SCHED_FIFO");
  CHECK(sched_policy_name(SchedPolicy::Other) == "SCHED_OTHER");
  CHECK(sched_policy_name(SchedPolicy::Rr) == "SCHED_RR");
  CHECK(parse_sched_policy("SCHED_FIFO") == SchedPolicy::Fifo);
  CHECK(parse_sched_policy("FIFO") == SchedPolicy::Fifo);
  CHECK(parse_sched_policy("RR") == SchedPolicy::Rr);
  CHECK(parse_sched_policy("OTHER") == SchedPolicy::Other);
  CHECK(parse_sched_policy("SCHED_DEADLINE") == std::nullopt);
  for (auto p : {SchedPolicy::Other, SchedPolicy::Fifo, SchedPolicy::Rr}) {
    CHECK(parse_sched_policy(sched_policy_name(p)) == p);
  }
}
