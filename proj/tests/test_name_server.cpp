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

#include <algorithm>
#include <thread>

#include "common/error.hpp"
#include "doctest.h"
#include "name_server/client.hpp"
#include "name_server/registry.hpp"
#include "name_server/server.hpp"

using namespace prioport;
using namespace prioport::ns;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& error) {
    return error.code();
  }
  return Errc::ok;
}

}  // namespace

TEST_CASE("registry stores and returns the exact triplet") {
  Registry registry;
  EndpointTriplet endpoint{"127.0.0.1", 10002, "tcp"};
  registry.add("/publisher1", endpoint);
  auto found = registry.find("/publisher1");
  REQUIRE(found.has_value());
  CHECK(*found == endpoint);
  CHECK(registry.size() == 1);
}

TEST_CASE("registry re-register semantics") {
  Registry registry;
  EndpointTriplet first{"10.0.0.1", 7000, "tcp"};
  registry.add("/p", first);
  // Identical endpoint: idempotent success.
  registry.add("/p", first);
  CHECK(registry.size() == 1);
  // Different endpoint: rejected, original entry untouched.
  EndpointTriplet second{"10.0.0.2", 7000, "tcp"};
  CHECK(code_of([&] { registry.add("/p", second); }) ==
        Errc::name_already_registered);
  CHECK(*registry.find("/p") == first);
}

TEST_CASE("registry unregister is idempotent and complete") {
  Registry registry;
  registry.add("/a", {"h", 1, "tcp"});
  registry.remove("/a");
  CHECK_FALSE(registry.find("/a").has_value());
  registry.remove("/a");
  registry.remove("/never-there");
  CHECK(registry.size() == 0);
  CHECK(registry.snapshot().empty());
}

TEST_CASE("registry rejects malformed names") {
  Registry registry;
  EndpointTriplet endpoint{"h", 1, "tcp"};
  for (const char* bad : {"", "/", "noslash", "/has space", "/tab\tname"}) {
    CHECK(code_of([&] { registry.add(bad, endpoint); }) ==
          Errc::malformed_name);
  }
  CHECK(registry.size() == 0);
}

TEST_CASE("registry snapshot lists every distinct name") {
  Registry registry;
  for (int i = 0; i < 100; ++i) {
    registry.add("/port" + std::to_string(i),
                 {"127.0.0.1", static_cast<uint16_t>(9000 + i), "udp"});
  }
  auto entries = registry.snapshot();
  REQUIRE(entries.size() == 100);
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  CHECK(std::adjacent_find(entries.begin(), entries.end(),
                           [](const auto& a, const auto& b) {
                             return a.first == b.first;
                           }) == entries.end());
}

TEST_CASE("server round-trips the full protocol") {
  NameServer server("127.0.0.1", 0);
  NameClient client("127.0.0.1", server.port());

  SUBCASE("register, lookup, unregister, lookup") {
    EndpointTriplet endpoint{"127.0.0.1", 10002, "tcp"};
    client.register_name("/publisher1", endpoint);
    CHECK(client.lookup("/publisher1") == endpoint);
    client.unregister("/publisher1");
    CHECK_FALSE(client.try_lookup("/publisher1").has_value());
    CHECK(code_of([&] { client.lookup("/publisher1"); }) == Errc::not_found);
  }

  SUBCASE("registration errors carry the server-side code") {
    client.register_name("/p", {"10.0.0.1", 7000, "tcp"});
    CHECK(code_of([&] {
            client.register_name("/p", {"10.0.0.9", 7000, "tcp"});
          }) == Errc::name_already_registered);
    CHECK(code_of([&] { client.register_name("nope", {"h", 1, "tcp"}); }) ==
          Errc::malformed_name);
  }

  SUBCASE("list returns a parsable snapshot") {
    client.register_name("/a", {"127.0.0.1", 1111, "tcp"});
    client.register_name("/b", {"127.0.0.2", 2222, "udp"});
    auto entries = client.list();
    REQUIRE(entries.size() == 2);
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    CHECK(entries[0].first == "/a");
    CHECK(entries[0].second == EndpointTriplet{"127.0.0.1", 1111, "tcp"});
    CHECK(entries[1].first == "/b");
    CHECK(entries[1].second == EndpointTriplet{"127.0.0.2", 2222, "udp"});
  }

  SUBCASE("many commands reuse one connection") {
    for (int i = 0; i < 200; ++i) {
      std::string name = "/seq" + std::to_string(i);
      client.register_name(name, {"127.0.0.1", 9999, "tcp"});
      CHECK(client.try_lookup(name).has_value());
    }
    CHECK(client.list().size() == 200);
  }
}

TEST_CASE("raw protocol rejects garbage lines without dropping the session") {
  NameServer server("127.0.0.1", 0);
  auto conn = net::tcp_connect("127.0.0.1", server.port());
  net::LineReader reader(conn);
  auto ask = [&](const std::string& command) {
    std::string wire = command + "\n";
    net::send_all(conn, {reinterpret_cast<const uint8_t*>(wire.data()),
                         wire.size()});
    auto reply = reader.read_line();
    REQUIRE(reply.has_value());
    return *reply;
  };
  CHECK(ask("FROB /x") == "ERR unknown-verb");
  CHECK(ask("REGISTER /x 127.0.0.1 not-a-port tcp") == "ERR syntax-error");
  CHECK(ask("REGISTER /x 127.0.0.1 70000 tcp") == "ERR syntax-error");
  CHECK(ask("REGISTER /x 127.0.0.1 0 tcp") == "ERR syntax-error");
  CHECK(ask("QUERY") == "ERR syntax-error");
  CHECK(ask("") == "ERR syntax-error");
  // The session survives all of the above.
  CHECK(ask("REGISTER /x 127.0.0.1 4242 tcp") == "OK");
  CHECK(ask("QUERY /x") == "OK 127.0.0.1 4242 tcp");
}

TEST_CASE("client reconnects once after the server restarts on the same port") {
  auto server = std::make_unique<NameServer>("127.0.0.1", 0);
  uint16_t port = server->port();
  NameClient client("127.0.0.1", port);
  client.register_name("/x", {"127.0.0.1", 1, "tcp"});

  server->stop();
  server = std::make_unique<NameServer>("127.0.0.1", port);

  // The persistent connection is dead; the next call must still succeed.
  client.register_name("/y", {"127.0.0.1", 2, "tcp"});
  CHECK(client.try_lookup("/y").has_value());

  server->stop();
  CHECK(code_of([&] { client.lookup("/y"); }) == Errc::server_unreachable);
}

TEST_CASE("concurrent clients keep the registry a partial function") {
  NameServer server("127.0.0.1", 0);
  constexpr int kThreads = 8;
  constexpr int kOpsPerThread = 300;
  std::vector<std::thread> threads;
  threads.reserve(kThreads);
  for (int t = 0; t < kThreads; ++t) {
    threads.emplace_back([&, t] {
      NameClient client("127.0.0.1", server.port());
      // Half the threads fight over shared names, half own private ones.
      for (int i = 0; i < kOpsPerThread; ++i) {
        std::string name = (t % 2 == 0)
                               ? "/shared" + std::to_string(i % 7)
                               : "/own" + std::to_string(t);
        EndpointTriplet endpoint{"127.0.0.1",
                                 static_cast<uint16_t>(1000 + t), "tcp"};
        try {
          switch (i % 3) {
            case 0: client.register_name(name, endpoint); break;
            case 1: client.try_lookup(name); break;
            default: client.unregister(name); break;
          }
        } catch (const Error& error) {
          // Losing a registration race is the only acceptable failure.
          REQUIRE(error.code() == Errc::name_already_registered);
        }
      }
    });
  }
  for (auto& thread : threads) thread.join();
  auto entries = server.registry().snapshot();
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  CHECK(std::adjacent_find(entries.begin(), entries.end(),
                           [](const auto& a, const auto& b) {
                             return a.first == b.first;
                           }) == entries.end());
}

TEST_CASE("parse_hostport accepts host:port and rejects the rest") {
  auto [host, port] = parse_hostport("192.168.1.5:10000");
  CHECK(host == "192.168.1.5");
  CHECK(port == 10000);
  for (const char* bad : {"nohost", ":5", "h:", "h:0", "h:65536", "h:12x"}) {
    CHECK(code_of([&] { parse_hostport(bad); }) == Errc::usage);
  }
}
