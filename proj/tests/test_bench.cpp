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

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bench/bench.hpp"
#include "common/error.hpp"
#include "doctest.h"
#include "emu/world.hpp"
#include "name_server/server.hpp"
#include "port/port.hpp"

using namespace prioport;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& error) {
    return error.code();
  }
  return Errc::ok;
}

std::vector<bench::RttSample> samples_of(const std::vector<uint64_t>& rtts) {
  std::vector<bench::RttSample> out;
  uint64_t id = 1;
  for (const uint64_t r : rtts) out.push_back({id++, 0, r, r});
  return out;
}

struct EmuPair {
  ns::NameServer server{"127.0.0.1", 0};
  std::shared_ptr<emu::World> world;
  std::unique_ptr<port::Port> pub;
  std::unique_ptr<port::Port> sub;

  explicit EmuPair(emu::Topology topo, const std::string& pub_host,
                   const std::string& sub_host)
      : world(std::make_shared<emu::World>(std::move(topo))) {
    init(pub_host, sub_host);
  }

  EmuPair() : world(std::make_shared<emu::World>()) { init("pnode", "snode"); }

  void init(const std::string& pub_host, const std::string& sub_host) {
    port::PortConfig cfg;
    cfg.nameserver = "127.0.0.1:" + std::to_string(server.port());
    cfg.world = world;
    cfg.emu_host = pub_host;
    pub = std::make_unique<port::Port>("/probe/pub", cfg);
    cfg.emu_host = sub_host;
    sub = std::make_unique<port::Port>("/probe/sub", cfg);
    pub->connect("/probe/sub", wire::kCarrierEmu);
  }
};

}  // namespace

TEST_CASE("summary statistics use the population formula") {
  auto s = bench::summarize(samples_of({5, 5, 5}));
  CHECK(s.mean_ns == 5.0);
  CHECK(s.stddev_ns == 0.0);
  CHECK(s.n == 3);

  s = bench::summarize(samples_of({2, 4, 4, 4, 5, 5, 7, 9}));
  CHECK(s.mean_ns == 5.0);
  CHECK(s.stddev_ns == 2.0);
  CHECK(s.n == 8);

  CHECK(code_of([] { bench::summarize({}); }) == Errc::empty_sample_set);
}

TEST_CASE("an idle emulated link yields the closed-form round trip") {
  // 1 MB/s, zero propagation: a 100-byte message frames to 125 wire bytes,
  // so one way costs exactly 125 us and the mirrored ack the same again.
  emu::Topology topo;
  topo.add_host("pnode");
  topo.add_host("snode");
  topo.add_link("pnode", "snode", 1'000'000, 0);
  EmuPair rig(std::move(topo), "pnode", "snode");

  bench::ProbeSpec spec;
  spec.size_bytes = 100;
  spec.rate_hz = 100;
  spec.count = 20;
  spec.warmup = 5;
  const auto result = bench::run_rtt_probe(*rig.pub, "/probe/sub", spec);
  CHECK(result.samples.size() == 20);
  CHECK(result.drops == 0);
  for (const auto& s : result.samples) CHECK(s.rtt_ns == 250'000);
}

TEST_CASE("a zero-count probe is an empty success") {
  EmuPair rig;
  bench::ProbeSpec spec;
  spec.count = 0;
  spec.warmup = 10;
  const auto result = bench::run_rtt_probe(*rig.pub, "/probe/sub", spec);
  CHECK(result.samples.empty());
  CHECK(result.drops == 0);
}

TEST_CASE("a probe over a dead link reports zero acks") {
  EmuPair rig;
  rig.world->set_drop_all(1, true);  // the rig's only flow is the first
  bench::ProbeSpec spec;
  spec.count = 10;
  spec.warmup = 2;
  CHECK(code_of([&] {
    bench::run_rtt_probe(*rig.pub, "/probe/sub", spec);
  }) == Errc::zero_acks);
}

TEST_CASE("generated load matches the requested fraction") {
  EmuPair rig;
  bench::LoadSpec spec;
  spec.fraction = 0.2;
  spec.message_size_bytes = 32 * 1024;

  auto report = bench::run_load(*rig.pub, "/probe/sub", spec, 0.5);
  CHECK(report.target_bytes_per_sec == doctest::Approx(25e6));
  CHECK(report.achieved_fraction > 0.95);
  CHECK(report.achieved_fraction < 1.05);
  CHECK(report.sustained);
  CHECK(report.messages > 0);

  report = bench::run_load(*rig.pub, "/probe/sub", spec, 0.0);
  CHECK(report.messages == 0);
  CHECK(report.sustained);

  CHECK(code_of([&] {
    bench::LoadSpec bad;
    bad.fraction = 1.5;
    bench::run_load(*rig.pub, "/probe/sub", bad, 0.1);
  }) == Errc::usage);
}

namespace {

bench::ScenarioConfig quick_nic(double load, bool qos) {
  bench::ScenarioConfig c;
  c.scenario = "nic";
  c.qos = qos;
  c.load_fraction = load;
  c.probe_count = 60;
  c.probe_warmup = 20;
  return c;
}

}  // namespace

TEST_CASE("prioritization shortens and steadies loaded round trips") {
  const auto off_idle = bench::run_scenario(quick_nic(0.0, false));
  const auto on_idle = bench::run_scenario(quick_nic(0.0, true));
  const auto off_low = bench::run_scenario(quick_nic(0.2, false));
  const auto on_low = bench::run_scenario(quick_nic(0.2, true));
  const auto off_high = bench::run_scenario(quick_nic(0.7, false));
  const auto on_high = bench::run_scenario(quick_nic(0.7, true));

  // Load monotonicity for the unprioritized runs.
  CHECK(off_high.mean_ns >= off_low.mean_ns);
  CHECK(off_low.mean_ns >= off_idle.mean_ns);

  // With nothing to prioritize against, marking changes nothing at all.
  CHECK(on_idle.mean_ns == off_idle.mean_ns);
  CHECK(on_idle.stddev_ns == off_idle.stddev_ns);

  // Under load the prioritized channel is strictly faster and steadier,
  // and the margin grows with the load.
  CHECK(on_low.mean_ns < off_low.mean_ns);
  CHECK(on_low.stddev_ns < off_low.stddev_ns);
  CHECK(on_high.mean_ns < off_high.mean_ns);
  CHECK(on_high.stddev_ns < off_high.stddev_ns);
  const double gain_low = (off_low.mean_ns - on_low.mean_ns) / off_low.mean_ns;
  const double gain_high =
      (off_high.mean_ns - on_high.mean_ns) / off_high.mean_ns;
  CHECK(gain_high > gain_low);
}

TEST_CASE("emulated scenario runs are bit-stable") {
  auto config = quick_nic(0.7, true);
  const auto first = bench::run_scenario(config);
  const auto second = bench::run_scenario(config);
  CHECK(bench::csv_row(first) == bench::csv_row(second));
}

TEST_CASE("report rows render the declared csv columns") {
  CHECK(bench::csv_header() ==
        "scenario,qos,load_fraction,probe_carrier,load_carrier,n,mean_ns,"
        "stddev_ns,drops");
  bench::ReportRow row;
  row.scenario = "nic";
  row.qos = true;
  row.load_fraction = 0.7;
  row.probe_carrier = "emu:tcp";
  row.load_carrier = "emu:udp";
  row.n = 300;
  row.mean_ns = 12345.67;
  row.stddev_ns = 89.5;
  row.drops = 2;
  CHECK(bench::csv_row(row) ==
        "nic,on,0.7,emu:tcp,emu:udp,300,12345.7,89.5,2");
}
