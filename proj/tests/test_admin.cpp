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

#include <random>

#include "common/error.hpp"
#include "qos/admin.hpp"

using namespace prioport;
using namespace prioport::qos;

namespace {

Errc code_of(std::string_view text) {
  try {
    parse_admin_command(text);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::ok;
}

AdminRequest random_request(std::mt19937& rng) {
  AdminRequest r;
  r.target_peer = "/";
  const char pool[] = "abcdefghijklmnopqrstuvwxyz0123456789_-";
  size_t len = 1 + rng() % 12;
  for (size_t i = 0; i < len; ++i) r.target_peer += pool[rng() % (sizeof(pool) - 1)];
  if (rng() % 4 == 0) {
    r.verb = AdminVerb::PropGet;
    return r;
  }
  r.verb = AdminVerb::PropSet;
  switch (rng() % 3) {
    case 0: {
      std::vector<Sexpr> pairs = {Sexpr::list(
          {Sexpr::symbol("policy"),
           Sexpr::symbol(std::string(sched_policy_name(
               static_cast<SchedPolicy>(rng() % 3))))})};
      if (rng() % 2) {
        pairs.push_back(Sexpr::list({Sexpr::symbol("priority"),
                                     Sexpr::integer(int64_t(rng() % 99) + 1)}));
      }
      r.property =
          Sexpr::list({Sexpr::symbol("sched"), Sexpr::list(std::move(pairs))});
      break;
    }
    case 1: {
      static const char* classes[] = {"LOW", "NORMAL", "HIGH", "CRITICAL"};
      r.property = Sexpr::list(
          {Sexpr::symbol("qos"),
           Sexpr::list({Sexpr::list({Sexpr::symbol("priority"),
                                     Sexpr::symbol(classes[rng() % 4])})})});
      break;
    }
    default:
      r.property = Sexpr::list(
          {Sexpr::symbol("qlen"), Sexpr::integer(int64_t(rng() % 4096) + 1)});
  }
  return r;
}

}  // namespace

TEST_CASE("the thread-policy command parses in its published multi-line form") {
  const std::string text =
      "prop set /subscriber1 (sched \n"
      "                         ((policy SCHED_FIFO) \n"
      "                          (priority 30))) ";
  AdminRequest r = parse_admin_command(text);
  CHECK(r.verb == AdminVerb::PropSet);
  CHECK(r.target_peer == "/subscriber1");
  REQUIRE(r.property.items.size() == 2);
  CHECK(r.property.items[0] == Sexpr::symbol("sched"));
  ParsedSched s = sched_from_property(r.property);
  CHECK(s.policy == SchedPolicy::Fifo);
  CHECK(s.priority == 30);
}

TEST_CASE("the packet-priority command parses in its published form") {
  AdminRequest r =
      parse_admin_command("prop set /subscriber1 (qos ((priority HIGH))) ");
  CHECK(r.verb == AdminVerb::PropSet);
  CHECK(r.target_peer == "/subscriber1");
  CHECK(qos_from_property(r.property) == PriorityClass::High);
}

TEST_CASE("prop get takes only a peer name") {
  AdminRequest r = parse_admin_command("prop get /subscriber1");
  CHECK(r.verb == AdminVerb::PropGet);
  CHECK(r.target_peer == "/subscriber1");
  CHECK(r.property == Sexpr::list({}));
}

TEST_CASE("bad commands map to distinct error codes") {
  CHECK(code_of("props set /a (qlen 1)") == Errc::unknown_verb);
  CHECK(code_of("prop frob /a (qlen 1)") == Errc::unknown_verb);
  CHECK(code_of("prop set /a (frobnicate 1)") == Errc::unknown_property);
  CHECK(code_of("prop set noslash (qlen 1)") == Errc::syntax_error);
  CHECK(code_of("prop set /a (qlen 1) trailing") == Errc::syntax_error);
  CHECK(code_of("prop get /a extra") == Errc::syntax_error);
  CHECK(code_of("prop set /a (qlen") == Errc::syntax_error);
  CHECK(code_of("prop set /a 7") == Errc::syntax_error);
  CHECK(code_of("") == Errc::syntax_error);
}

TEST_CASE("requests round-trip through their textual form") {
  std::mt19937 rng(31);
  for (int i = 0; i < 2000; ++i) {
    AdminRequest r = random_request(rng);
    CHECK(parse_admin_command(render_admin_request(r)) == r);
  }
}

TEST_CASE("typed property views reject malformed shapes") {
  auto prop = [](std::string_view text) {
    size_t pos = 0;
    return parse_sexpr(text, &pos);
  };
  CHECK_THROWS_AS(sched_from_property(prop("(sched ())")), Error);
  CHECK_THROWS_AS(sched_from_property(prop("(sched ((policy NOPE)))")), Error);
  CHECK_THROWS_AS(
      sched_from_property(prop("(sched ((policy SCHED_FIFO) (priority x)))")),
      Error);
  CHECK_THROWS_AS(qos_from_property(prop("(qos ((priority 9)))")), Error);
  CHECK_THROWS_AS(qos_from_property(prop("(qos ())")), Error);
  CHECK_THROWS_AS(qlen_from_property(prop("(qlen 0)")), Error);
  CHECK_THROWS_AS(qlen_from_property(prop("(qlen big)")), Error);
  CHECK(qlen_from_property(prop("(qlen 128)")) == 128);
  ParsedSched s = sched_from_property(prop("(sched ((policy SCHED_OTHER)))"));
  CHECK(s.policy == SchedPolicy::Other);
  CHECK(s.priority == 0);
}

TEST_CASE("set replies render plain, degraded and error forms") {
  CHECK(render_set_reply("") == "ok");
  CHECK(render_set_reply("permission") == "ok (degraded \"permission\")");
  CHECK(render_err_reply(Errc::no_such_channel) == "err no-such-channel");
  CHECK(render_err_reply(Errc::invalid_priority) ==
        "err invalid-priority-for-policy");
}

TEST_CASE("get replies carry sched, qos, counters and status") {
  ChannelReport rep;
  rep.sched = {SchedPolicy::Fifo, 30, true, ""};
  rep.packet_priority = PriorityClass::High;
  rep.enqueued = 10;
  rep.sent = 7;
  rep.dropped = 1;
  rep.queued = 2;
  rep.acks = 5;
  std::string reply = render_get_reply(rep);
  CHECK(reply.substr(0, 3) == "ok ");
  CHECK(reply.find("(qos ((priority HIGH) (dscp AF42)))") != std::string::npos);
  CHECK(reply.find("(policy SCHED_FIFO)") != std::string::npos);
  CHECK(reply.find("(priority 30)") != std::string::npos);
  CHECK(reply.find("(enqueued 10)") != std::string::npos);
  CHECK(reply.find("(queued 2)") != std::string::npos);
  CHECK(reply.find("(status active)") != std::string::npos);

  rep.sched = {SchedPolicy::Fifo, 30, false, "permission"};
  reply = render_get_reply(rep);
  CHECK(reply.find("(applied 0)") != std::string::npos);
  CHECK(reply.find("(degraded \"permission\")") != std::string::npos);
}
