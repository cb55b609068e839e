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

#include <algorithm>
#include <random>
#include <sstream>

#include "common/error.hpp"
#include "emu/engine.hpp"
#include "emu/topology.hpp"

using namespace prioport;
using namespace prioport::emu;

namespace {

constexpr uint64_t kMegabytePerSec = 1'000'000;

Topology one_link(uint64_t rate = kMegabytePerSec, uint64_t delay = 0) {
  Topology t;
  t.add_host("a");
  t.add_host("b");
  t.add_link("a", "b", rate, delay);
  return t;
}

Admission admit(uint64_t t_ns, uint8_t tos, uint32_t size, uint32_t src,
                uint32_t dst, uint64_t flow, uint64_t msg, int weight = 0) {
  Admission a;
  a.t_ns = t_ns;
  a.weight = weight;
  a.packet.tos = tos;
  a.packet.size_bytes = size;
  a.packet.src = src;
  a.packet.dst = dst;
  a.packet.flow = flow;
  a.packet.message_id = msg;
  return a;
}

}  // namespace

TEST_CASE("a 1000-byte packet crosses an idle 1 MB/s link in exactly 1 ms") {
  Engine eng(one_link());
  eng.run({admit(0, 0x00, 1000, 0, 1, 1, 1)});
  REQUIRE(eng.deliveries().size() == 1);
  CHECK(eng.deliveries()[0].delivered_ns == 1'000'000);
}

TEST_CASE("propagation delay and a second hop add up exactly") {
  Topology t;
  t.add_host("pub");
  t.add_switch("sw");
  t.add_host("sub");
  t.add_link("pub", "sw", kMegabytePerSec, 250);
  t.add_link("sw", "sub", kMegabytePerSec, 250);
  Engine eng(std::move(t));
  // 1000 B serializes in 1 ms per hop; two hops plus two 250 ns hauls.
  eng.run({admit(0, 0x00, 1000, 0, 2, 1, 1)});
  REQUIRE(eng.deliveries().size() == 1);
  CHECK(eng.deliveries()[0].delivered_ns == 2 * 1'000'000 + 2 * 250);
}

TEST_CASE("a high-band packet overtakes queued low-band backlog") {
  Engine eng(one_link());
  std::vector<Admission> batch;
  for (uint64_t i = 0; i < 5; ++i) {
    batch.push_back(admit(0, 0x00, 1000, 0, 1, 1, i));  // band 1, 1 ms each
  }
  // Admitted mid-service of the third backlog packet (2.0 ms .. 3.0 ms).
  batch.push_back(admit(2'500'000, 0x90, 100, 0, 1, 2, 0));  // band 0
  eng.run(std::move(batch));

  REQUIRE(eng.deliveries().size() == 6);
  std::vector<std::pair<uint64_t, uint64_t>> order;  // (flow, delivered)
  for (const auto& d : eng.deliveries()) {
    order.emplace_back(d.packet.flow, d.delivered_ns);
  }
  // Backlog 0,1,2 finish first, then the probe preempts the queue (residual
  // service 0.5 ms + its own 0.1 ms), then backlog 3,4 resume.
  CHECK(order[0] == std::pair{uint64_t{1}, uint64_t{1'000'000}});
  CHECK(order[2] == std::pair{uint64_t{1}, uint64_t{3'000'000}});
  CHECK(order[3] == std::pair{uint64_t{2}, uint64_t{3'100'000}});
  CHECK(order[4] == std::pair{uint64_t{1}, uint64_t{4'100'000}});
  CHECK(order[5] == std::pair{uint64_t{1}, uint64_t{5'100'000}});
}

TEST_CASE("same-instant admissions at one host order by thread weight") {
  Engine eng(one_link());
  std::vector<Admission> batch;
  batch.push_back(admit(0, 0x00, 1000, 0, 1, 1, 0, 0));   // weight 0
  batch.push_back(admit(0, 0x00, 1000, 0, 1, 2, 0, 30));  // weight 30
  eng.run(std::move(batch));
  REQUIRE(eng.deliveries().size() == 2);
  CHECK(eng.deliveries()[0].packet.flow == 2);  // heavier thread admitted first
  CHECK(eng.deliveries()[1].packet.flow == 1);

  // Equal weights fall back to flow order.
  Engine eng2(one_link());
  std::vector<Admission> tie;
  tie.push_back(admit(0, 0x00, 1000, 0, 1, 2, 0, 10));
  tie.push_back(admit(0, 0x00, 1000, 0, 1, 1, 0, 10));
  eng2.run(std::move(tie));
  CHECK(eng2.deliveries()[0].packet.flow == 1);
}

TEST_CASE("the delivery trace is independent of admission collection order") {
  auto build = [](unsigned shuffle_seed) {
    std::vector<Admission> batch;
    std::mt19937 rng(97);
    for (int i = 0; i < 300; ++i) {
      const uint8_t tos = (i % 3 == 0) ? 0x90 : (i % 3 == 1 ? 0x00 : 0x28);
      batch.push_back(admit(rng() % 2'000'000, tos, 100 + rng() % 1400, 0, 1,
                            1 + rng() % 4, i, int(rng() % 40)));
    }
    std::shuffle(batch.begin(), batch.end(), std::mt19937(shuffle_seed));
    Engine eng(one_link());
    eng.run(std::move(batch));
    return eng.trace_csv();
  };
  const std::string first = build(1);
  CHECK(first == build(2));
  CHECK(first == build(3));
}

TEST_CASE("a saturated link never idles") {
  Engine eng(one_link(125'000'000));  // 1 Gbit/s: 1500 B = 12 us
  std::vector<Admission> batch;
  for (uint64_t i = 0; i < 50; ++i) {
    batch.push_back(admit(0, 0x00, 1500, 0, 1, 1, i));
  }
  eng.run(std::move(batch));
  REQUIRE(eng.deliveries().size() == 50);
  for (size_t i = 0; i < 50; ++i) {
    CHECK(eng.deliveries()[i].delivered_ns == (i + 1) * 12'000);
  }
}

TEST_CASE("overloading one egress drops a computable excess") {
  // Two 1 MB/s feeds into a 1 MB/s egress, 1000-byte packets, so the switch
  // queue grows by one packet per millisecond. With capacity 10 the first
  // drops hit the packets admitted at t = 10 ms, and from then on one of
  // the two arrivals per tick is surplus.
  Topology t;
  t.add_host("a");
  t.add_host("b");
  t.add_switch("sw");
  t.add_host("c");
  t.add_link("a", "sw", kMegabytePerSec);
  t.add_link("b", "sw", kMegabytePerSec);
  t.add_link("sw", "c", kMegabytePerSec);
  Engine eng(std::move(t));
  eng.set_queue_capacity(10);

  std::vector<Admission> batch;
  for (uint64_t i = 0; i < 30; ++i) {
    batch.push_back(admit(i * 1'000'000, 0x00, 1000, 0, 3, 1, i));
    batch.push_back(admit(i * 1'000'000, 0x00, 1000, 1, 3, 2, i));
  }
  eng.run(std::move(batch));

  CHECK(eng.total_drops() == 21);
  REQUIRE(eng.deliveries().size() == 39);
  for (size_t i = 0; i < eng.deliveries().size(); ++i) {
    CHECK(eng.deliveries()[i].delivered_ns == (i + 2) * 1'000'000);
  }
  // The queue fills linearly at 1 packet/ms and holds exactly k packets
  // after tick k. At tick 10 the two arrivals (admitted at t = 9 ms) are
  // processed before the transmit completion frees a slot, so the second
  // of them is the first drop.
  uint64_t first_dropped_admission = UINT64_MAX;
  const std::string csv = eng.trace_csv();
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    if (line.back() != '1') continue;
    const size_t c3 = line.find(',', line.find(',', line.find(',') + 1) + 1);
    const uint64_t enq = std::stoull(line.substr(c3 + 1));
    first_dropped_admission = std::min(first_dropped_admission, enq);
  }
  CHECK(first_dropped_admission == 9'000'000);
}

TEST_CASE("acknowledged packets make the round trip in twice the wire time") {
  Engine eng(one_link());
  eng.set_auto_ack(true);
  Admission a = admit(0, 0x90, 100, 0, 1, 7, 42);
  a.packet.want_ack = true;
  a.packet.ack_size_bytes = 100;
  eng.run({a});
  REQUIRE(eng.acks().size() == 1);
  CHECK(eng.acks()[0].flow == 7);
  CHECK(eng.acks()[0].message_id == 42);
  CHECK(eng.acks()[0].delivered_ns == 200'000);  // 2 x 100 B at 1 MB/s
}

TEST_CASE("the clock never runs backwards across batches") {
  Engine eng(one_link());
  eng.run({admit(5'000'000, 0x00, 1000, 0, 1, 1, 1)});
  CHECK(eng.now_ns() == 6'000'000);
  CHECK_THROWS_AS(eng.run({admit(0, 0x00, 1000, 0, 1, 1, 2)}), Error);
}

TEST_CASE("live admissions deliver through the sink in admission order") {
  Engine eng(one_link());
  std::vector<uint64_t> got;
  eng.set_delivery_sink([&](const Delivery& d) { got.push_back(d.packet.message_id); });
  for (uint64_t i = 0; i < 5; ++i) {
    EmuPacket p;
    p.tos = 0;
    p.size_bytes = 500;
    p.src = 0;
    p.dst = 1;
    p.flow = 1;
    p.message_id = i;
    eng.admit_now(std::move(p), 0);
  }
  CHECK(got == std::vector<uint64_t>{0, 1, 2, 3, 4});
}

TEST_CASE("declarative topology text builds nodes, links and defaults") {
  const std::string text =
      "# two hosts through a switch\n"
      "host host1\n"
      "host host3\n"
      "switch sw0\n"
      "link host1 sw0 125000000 1000\n"
      "link sw0 host3\n";
  Topology t = Topology::parse(text);
  CHECK(t.node_count() == 3);
  CHECK(t.has_node("host1"));
  CHECK(t.node_kind(t.node("sw0")) == NodeKind::Switch);
  REQUIRE(t.wires().size() == 4);
  CHECK(t.wires()[0].rate_bytes_per_sec == 125'000'000);
  CHECK(t.wires()[0].propagation_delay_ns == 1000);
  CHECK(t.wires()[2].rate_bytes_per_sec == kDefaultRateBytesPerSec);

  // Routing: no direct link, so host1 reaches host3 via the switch.
  const uint32_t w = t.next_wire(t.node("host1"), t.node("host3"));
  CHECK(t.wires()[w].to == t.node("sw0"));
}

TEST_CASE("bad topology text and routes are rejected") {
  CHECK_THROWS_AS(Topology::parse("link a b\n"), Error);       // undeclared
  CHECK_THROWS_AS(Topology::parse("frob x\n"), Error);         // keyword
  CHECK_THROWS_AS(Topology::parse("host a extra\n"), Error);   // trailing
  CHECK_THROWS_AS(Topology::parse("host a\nhost b\nlink a b fast\n"), Error);

  Topology t;
  t.add_host("a");
  t.add_host("b");
  t.add_host("c");
  t.add_link("a", "b");
  CHECK_THROWS_AS(t.next_wire(t.node("a"), t.node("c")), Error);
  try {
    t.next_wire(t.node("a"), t.node("c"));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unknown_host);
  }
  // A direct link wins over a switch path when both exist.
  Topology d = Topology::parse(
      "host x\nhost y\nswitch s\nlink x s\nlink s y\nlink x y\n");
  const uint32_t w = d.next_wire(d.node("x"), d.node("y"));
  CHECK(d.wires()[w].to == d.node("y"));
}
