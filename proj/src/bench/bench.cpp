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

#include "bench/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "common/clock.hpp"
#include "common/error.hpp"
#include "emu/world.hpp"
#include "name_server/server.hpp"
#include "qos/priority.hpp"
#include "qos/sched.hpp"
#include "wire/frame.hpp"
#include "wire/profile.hpp"

namespace prioport::bench {
namespace {

// Acknowledgment times keyed by message id, filled by the channel's ack
// observer. The observer may run under the emulator's event-loop lock, so
// it only appends here.
struct AckLog {
  std::mutex mu;
  std::map<uint64_t, std::pair<uint64_t, uint64_t>> acked;  // id -> send, ack

  size_t size() {
    std::lock_guard lock(mu);
    return acked.size();
  }
};

struct SendRec {
  uint64_t id = 0;
  uint64_t t_ns = 0;
};

std::shared_ptr<AckLog> attach_ack_log(port::Port& src,
                                       const std::string& dst) {
  auto log = std::make_shared<AckLog>();
  src.set_ack_observer(dst, [log](uint64_t id, uint64_t send_ns,
                                  uint64_t ack_ns) {
    std::lock_guard lock(log->mu);
    log->acked.emplace(id, std::make_pair(send_ns, ack_ns));
  });
  return log;
}

// Total bytes one message occupies on the wire, segmentation and per-segment
// overhead included for emulated carriers.
uint64_t wire_bytes_per_message(const std::string& carrier,
                                size_t payload_bytes) {
  const size_t frame = wire::kHeaderSize + payload_bytes;
  if (!wire::is_emu_carrier(carrier)) return frame;
  const auto profile = wire::emu_profile(carrier);
  const uint32_t n = wire::segment_count(profile, frame);
  uint64_t total = 0;
  for (uint32_t i = 0; i < n; ++i) {
    total += wire::segment_wire_bytes(profile, frame, i, n);
  }
  return total;
}

port::ChannelInfo active_channel(port::Port& src, const std::string& dst) {
  auto info = src.channel_info(dst);
  if (info.status == "closed") {
    raise(Errc::channel_down, "channel to " + dst + " is down");
  }
  return info;
}

// Publishes warmup+count ack-requested messages with explicit timestamps:
// start + i*period + jitter. Virtual time in collect mode, a schedule the
// pacer follows otherwise.
std::vector<SendRec> publish_probe_schedule(port::Port& src,
                                            const ProbeSpec& spec,
                                            uint64_t start_ns,
                                            uint64_t jitter_cap_ns,
                                            uint64_t seed) {
  const auto period = static_cast<uint64_t>(1e9 / spec.rate_hz);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<uint64_t> jitter(0, jitter_cap_ns);
  std::vector<uint8_t> payload(spec.size_bytes, 0x5A);
  std::vector<SendRec> recs;
  recs.reserve(spec.warmup + spec.count);
  port::PublishOptions opts;
  opts.want_ack = true;
  for (size_t i = 0; i < spec.warmup + spec.count; ++i) {
    opts.timestamp_ns =
        start_ns + i * period + (jitter_cap_ns ? jitter(rng) : 0);
    const uint64_t id =
        src.publish(std::span(payload.data(), payload.size()), opts);
    recs.push_back({id, opts.timestamp_ns});
  }
  return recs;
}

// Walks the counted (post-warmup) sends against the ack log.
ProbeResult harvest(const std::vector<SendRec>& recs, const ProbeSpec& spec,
                    AckLog& log) {
  ProbeResult out;
  std::lock_guard lock(log.mu);
  for (size_t i = spec.warmup; i < recs.size(); ++i) {
    auto it = log.acked.find(recs[i].id);
    if (it == log.acked.end()) {
      ++out.drops;
      continue;
    }
    RttSample s;
    s.message_id = recs[i].id;
    s.send_ns = it->second.first;
    s.ack_ns = it->second.second;
    s.rtt_ns = s.ack_ns - s.send_ns;
    out.samples.push_back(s);
  }
  if (spec.count > 0 && out.samples.empty()) {
    raise(Errc::zero_acks, "no probe acknowledgment arrived");
  }
  return out;
}

// Real-carrier pacing: send at absolute schedule instants, then give
// stragglers a bounded grace period.
std::vector<SendRec> run_probe_live(port::Port& src, const std::string& dst,
                                    const ProbeSpec& spec, AckLog& log) {
  const auto period = static_cast<uint64_t>(1e9 / spec.rate_hz);
  std::vector<uint8_t> payload(spec.size_bytes, 0x5A);
  std::vector<SendRec> recs;
  recs.reserve(spec.warmup + spec.count);
  port::PublishOptions opts;
  opts.want_ack = true;
  const auto t0 = std::chrono::steady_clock::now();
  for (size_t i = 0; i < spec.warmup + spec.count; ++i) {
    std::this_thread::sleep_until(t0 + std::chrono::nanoseconds(i * period));
    const uint64_t id =
        src.publish(std::span(payload.data(), payload.size()), opts);
    recs.push_back({id, 0});
  }
  src.flush(dst, spec.ack_timeout_ms);
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::milliseconds(spec.ack_timeout_ms);
  while (log.size() < recs.size() &&
         std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  return recs;
}

uint64_t fnv1a(std::string_view text, uint64_t h = 1469598103934665603ull) {
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot read topology file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Summary summarize(std::span<const RttSample> samples) {
  if (samples.empty()) {
    raise(Errc::empty_sample_set, "no samples to summarize");
  }
  double sum = 0;
  for (const auto& s : samples) sum += static_cast<double>(s.rtt_ns);
  const double mean = sum / static_cast<double>(samples.size());
  double var = 0;
  for (const auto& s : samples) {
    const double d = static_cast<double>(s.rtt_ns) - mean;
    var += d * d;
  }
  var /= static_cast<double>(samples.size());
  return Summary{mean, std::sqrt(var), samples.size()};
}

ProbeResult run_rtt_probe(port::Port& src, const std::string& dst,
                          const ProbeSpec& spec) {
  const auto info = active_channel(src, dst);
  if (spec.warmup + spec.count == 0) return {};
  auto log = attach_ack_log(src, dst);
  src.set_channel_qlen(dst, spec.warmup + spec.count + 16);

  std::vector<SendRec> recs;
  if (wire::is_emu_carrier(info.carrier)) {
    auto world = src.world();
    // Virtual schedules start at the world's current instant; a reused
    // world may already be past zero.
    const uint64_t t0 = world->now_ns();
    world->begin_collect();
    recs = publish_probe_schedule(src, spec, t0, 0, 0);
    if (!src.flush(dst, 10'000)) {
      raise(Errc::timeout, "probe transmit queue did not drain");
    }
    world->run_collected();
  } else {
    recs = run_probe_live(src, dst, spec, *log);
  }
  return harvest(recs, spec, *log);
}

LoadReport run_load(port::Port& src, const std::string& dst,
                    const LoadSpec& spec, double duration_s) {
  if (spec.fraction < 0 || spec.fraction > 1) {
    raise(Errc::usage, "load fraction must be within (0, 1]");
  }
  const auto info = active_channel(src, dst);
  LoadReport report;
  report.target_bytes_per_sec =
      spec.fraction * static_cast<double>(spec.link_bytes_per_sec);
  if (duration_s <= 0 || spec.fraction == 0) {
    report.achieved_fraction = 1;
    return report;
  }

  const uint64_t per_msg =
      wire_bytes_per_message(info.carrier, spec.message_size_bytes);
  const auto gap_ns = static_cast<uint64_t>(
      static_cast<double>(per_msg) * 1e9 / report.target_bytes_per_sec);
  const auto duration_ns = static_cast<uint64_t>(duration_s * 1e9);
  const uint64_t n = duration_ns / gap_ns;
  if (n == 0) {
    report.achieved_fraction = 0;
    report.sustained = false;
    return report;
  }

  src.set_channel_qlen(dst, n + 16);
  std::vector<uint8_t> payload(spec.message_size_bytes, 0x3C);
  port::PublishOptions opts;

  if (wire::is_emu_carrier(info.carrier)) {
    auto world = src.world();
    const uint64_t t0 = world->now_ns();
    world->begin_collect();
    for (uint64_t i = 0; i < n; ++i) {
      opts.timestamp_ns = t0 + i * gap_ns;
      src.publish(std::span(payload.data(), payload.size()), opts);
    }
    if (!src.flush(dst, 10'000)) {
      raise(Errc::timeout, "load transmit queue did not drain");
    }
    world->run_collected();
    report.messages = n;
    report.achieved_bytes_per_sec =
        static_cast<double>(n * per_msg) / duration_s;
  } else {
    const auto before = src.channel_info(dst).counters.sent;
    const auto t0 = std::chrono::steady_clock::now();
    for (uint64_t i = 0; i < n; ++i) {
      std::this_thread::sleep_until(t0 + std::chrono::nanoseconds(i * gap_ns));
      src.publish(std::span(payload.data(), payload.size()), opts);
    }
    src.flush(dst, 5'000);
    const std::chrono::duration<double> spent =
        std::chrono::steady_clock::now() - t0;
    const auto sent = src.channel_info(dst).counters.sent - before;
    report.messages = sent;
    report.achieved_bytes_per_sec =
        static_cast<double>(sent * per_msg) / spent.count();
  }
  report.achieved_fraction =
      report.achieved_bytes_per_sec / report.target_bytes_per_sec;
  report.sustained = report.achieved_fraction >= 0.9;
  return report;
}

namespace {

struct ScenarioPlan {
  std::string pub1_host;
  std::string pub2_host;
  std::string sub_host;
  size_t probe_size = 0;
};

ScenarioPlan plan_for(const ScenarioConfig& c) {
  if (c.scenario == "nic") {
    // Both publishers on one host: contention happens at that host's own
    // network-card egress.
    return {"pub-node", "pub-node", "sub-node",
            c.probe_size_bytes ? c.probe_size_bytes : 1024};
  }
  if (c.scenario == "switch") {
    // Publishers on separate hosts; both subscribers behind the same switch
    // egress, which is where the two flows merge. Larger probe messages.
    return {"h1", "h2", "h3",
            c.probe_size_bytes ? c.probe_size_bytes : 32 * 1024};
  }
  raise(Errc::usage, "unknown scenario '" + c.scenario + "'");
}

emu::Topology default_switch_topology() {
  emu::Topology t;
  t.add_host("h1");
  t.add_host("h2");
  t.add_host("h3");
  t.add_switch("sw");
  t.add_link("h1", "sw");
  t.add_link("h2", "sw");
  t.add_link("sw", "h3");
  return t;
}

uint64_t schedule_seed(const ScenarioConfig& c) {
  // qos deliberately left out: the on and off runs must sample the same
  // schedule so their comparison isolates prioritization.
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s|%.6f|%s|%s|%zu|%llu", c.scenario.c_str(),
                c.load_fraction, c.probe_carrier.c_str(),
                c.load_carrier.c_str(), c.load_message_bytes,
                static_cast<unsigned long long>(c.seed));
  return fnv1a(buf);
}

void wait_for_input(port::Port& p, const std::string& peer) {
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::seconds(5);
  for (;;) {
    for (const auto& info : p.channels()) {
      if (info.direction == "input" && info.peer == peer &&
          info.status != "closed") {
        return;
      }
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      raise(Errc::handshake_failure, "input channel from " + peer +
                                         " did not come up");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
}

void apply_measurement_qos(port::Port& probe_pub, port::Port& probe_sub,
                           const std::string& sub_name,
                           const std::string& pub_name) {
  // OS refusal only degrades; in the emulator the drain weight applies
  // regardless, which is the deterministic arm of the comparison.
  probe_pub.set_channel_sched(sub_name, qos::SchedPolicy::Fifo, 30);
  probe_pub.set_channel_priority(sub_name, qos::PriorityClass::High);
  probe_sub.set_channel_priority(pub_name, qos::PriorityClass::High);
}

ReportRow finish_row(const ScenarioConfig& c, const std::string& probe_token,
                     const std::string& load_token, const ProbeResult& probe) {
  const Summary s = summarize(probe.samples);
  ReportRow row;
  row.scenario = c.scenario;
  row.qos = c.qos;
  row.load_fraction = c.load_fraction;
  row.probe_carrier = probe_token;
  row.load_carrier = load_token;
  row.n = s.n;
  row.mean_ns = s.mean_ns;
  row.stddev_ns = s.stddev_ns;
  row.drops = probe.drops;
  return row;
}

ReportRow run_scenario_emulated(const ScenarioConfig& c,
                                const ScenarioPlan& plan) {
  const std::string probe_token = "emu:" + c.probe_carrier;
  const std::string load_token = "emu:" + c.load_carrier;

  ns::NameServer server("127.0.0.1", 0);
  const std::string ns_hostport =
      "127.0.0.1:" + std::to_string(server.port());

  std::shared_ptr<emu::World> world;
  if (!c.topology_file.empty()) {
    world = std::make_shared<emu::World>(
        emu::Topology::parse(read_text_file(c.topology_file)));
  } else if (c.scenario == "switch") {
    world = std::make_shared<emu::World>(default_switch_topology());
  } else {
    world = std::make_shared<emu::World>();
  }

  auto make_config = [&](const std::string& host) {
    port::PortConfig cfg;
    cfg.nameserver = ns_hostport;
    cfg.world = world;
    cfg.emu_host = host;
    return cfg;
  };
  port::Port pub1("/bench/pub1", make_config(plan.pub1_host));
  port::Port pub2("/bench/pub2", make_config(plan.pub2_host));
  port::Port sub1("/bench/sub1", make_config(plan.sub_host));
  port::Port sub2("/bench/sub2", make_config(plan.sub_host));

  pub1.connect("/bench/sub1", probe_token);
  pub2.connect("/bench/sub2", load_token);
  wait_for_input(sub1, "/bench/pub1");
  wait_for_input(sub2, "/bench/pub2");

  if (c.qos) {
    apply_measurement_qos(pub1, sub1, "/bench/sub1", "/bench/pub1");
  }

  ProbeSpec probe;
  probe.size_bytes = plan.probe_size;
  probe.rate_hz = c.probe_rate_hz;
  probe.count = c.probe_count;
  probe.warmup = c.probe_warmup;

  const auto period = static_cast<uint64_t>(1e9 / probe.rate_hz);
  const uint64_t probe_total = probe.warmup + probe.count;
  // The load window covers the whole probe schedule plus slack for the last
  // round trips, so every counted probe meets a saturated link.
  const uint64_t window_ns = probe_total * period + 100'000'000;

  uint64_t load_n = 0;
  uint64_t load_gap_ns = 0;
  if (c.load_fraction > 0) {
    const uint64_t per_msg =
        wire_bytes_per_message(load_token, c.load_message_bytes);
    const double target =
        c.load_fraction * static_cast<double>(c.link_bytes_per_sec);
    load_gap_ns =
        static_cast<uint64_t>(static_cast<double>(per_msg) * 1e9 / target);
    load_n = window_ns / load_gap_ns;
    pub2.set_channel_qlen("/bench/sub2", load_n + 16);
  }
  pub1.set_channel_qlen("/bench/sub1", probe_total + 16);

  auto log = attach_ack_log(pub1, "/bench/sub1");
  const uint64_t t0 = world->now_ns();
  world->begin_collect();

  if (load_n > 0) {
    std::vector<uint8_t> payload(c.load_message_bytes, 0x3C);
    port::PublishOptions opts;
    for (uint64_t i = 0; i < load_n; ++i) {
      opts.timestamp_ns = t0 + i * load_gap_ns;
      pub2.publish(std::span(payload.data(), payload.size()), opts);
    }
  }
  // Probe sends land at a seeded offset inside each period so the counted
  // samples cover all phases of the background-load cycle.
  const uint64_t jitter_cap = std::min<uint64_t>(period / 2, 2'000'000);
  const auto recs = publish_probe_schedule(pub1, probe, t0, jitter_cap,
                                           schedule_seed(c));

  if (!pub1.flush("/bench/sub1", 10'000) ||
      (load_n > 0 && !pub2.flush("/bench/sub2", 10'000))) {
    raise(Errc::timeout, "scenario transmit queues did not drain");
  }
  world->run_collected();

  return finish_row(c, probe_token, load_token, harvest(recs, probe, *log));
}

ReportRow run_scenario_real(const ScenarioConfig& c,
                            const ScenarioPlan& plan) {
  std::unique_ptr<ns::NameServer> own_server;
  std::string ns_hostport = c.nameserver;
  if (ns_hostport.empty()) {
    own_server = std::make_unique<ns::NameServer>("127.0.0.1", 0);
    ns_hostport = "127.0.0.1:" + std::to_string(own_server->port());
  }
  port::PortConfig cfg;
  cfg.nameserver = ns_hostport;

  port::Port pub1("/bench/pub1", cfg);
  port::Port pub2("/bench/pub2", cfg);
  port::Port sub1("/bench/sub1", cfg);
  port::Port sub2("/bench/sub2", cfg);

  pub1.connect("/bench/sub1", c.probe_carrier);
  pub2.connect("/bench/sub2", c.load_carrier);
  wait_for_input(sub1, "/bench/pub1");
  wait_for_input(sub2, "/bench/pub2");

  if (c.qos) {
    apply_measurement_qos(pub1, sub1, "/bench/sub1", "/bench/pub1");
  }

  ProbeSpec probe;
  probe.size_bytes = plan.probe_size;
  probe.rate_hz = c.probe_rate_hz;
  probe.count = c.probe_count;
  probe.warmup = c.probe_warmup;
  pub1.set_channel_qlen("/bench/sub1", probe.warmup + probe.count + 16);

  // Subscribers drain continuously so receive queues never overflow.
  std::atomic<bool> draining{true};
  auto drain = [&draining](port::Port& p) {
    while (draining.load()) {
      try {
        if (!p.read(50)) continue;
      } catch (const Error&) {
      }
    }
  };
  std::thread drain1(drain, std::ref(sub1));
  std::thread drain2(drain, std::ref(sub2));

  const double window_s =
      static_cast<double>(probe.warmup + probe.count) / probe.rate_hz + 1.0;
  std::thread load_thread;
  if (c.load_fraction > 0) {
    load_thread = std::thread([&] {
      LoadSpec spec;
      spec.fraction = c.load_fraction;
      spec.message_size_bytes = c.load_message_bytes;
      spec.link_bytes_per_sec = c.link_bytes_per_sec;
      run_load(pub2, "/bench/sub2", spec, window_s);
    });
    // Load saturates before the first counted probe; the warmup probes
    // absorb the ramp.
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
  }

  auto log = attach_ack_log(pub1, "/bench/sub1");
  const auto recs = run_probe_live(pub1, "/bench/sub1", probe, *log);

  if (load_thread.joinable()) load_thread.join();
  draining.store(false);
  drain1.join();
  drain2.join();

  return finish_row(c, c.probe_carrier, c.load_carrier,
                    harvest(recs, probe, *log));
}

}  // namespace

ReportRow run_scenario(const ScenarioConfig& c) {
  if (c.load_fraction < 0 || c.load_fraction > 1) {
    raise(Errc::usage, "load fraction must be within (0, 1]");
  }
  if (c.probe_carrier != wire::kCarrierTcp &&
      c.probe_carrier != wire::kCarrierUdp) {
    raise(Errc::usage, "probe carrier must be tcp or udp");
  }
  if (c.load_carrier != wire::kCarrierTcp &&
      c.load_carrier != wire::kCarrierUdp) {
    raise(Errc::usage, "load carrier must be tcp or udp");
  }
  const ScenarioPlan plan = plan_for(c);
  if (c.emulate) return run_scenario_emulated(c, plan);
  return run_scenario_real(c, plan);
}

std::string csv_header() {
  return "scenario,qos,load_fraction,probe_carrier,load_carrier,n,mean_ns,"
         "stddev_ns,drops";
}

std::string csv_row(const ReportRow& row) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%s,%g,%s,%s,%zu,%.1f,%.1f,%llu",
                row.scenario.c_str(), row.qos ? "on" : "off",
                row.load_fraction, row.probe_carrier.c_str(),
                row.load_carrier.c_str(), row.n, row.mean_ns, row.stddev_ns,
                static_cast<unsigned long long>(row.drops));
  return buf;
}

std::string render_svg_plot(std::span<const ReportRow> rows,
                            const std::string& title) {
  const int width = 900;
  const int height = 420;
  const int margin_left = 70;
  const int margin_bottom = 90;
  const int margin_top = 40;
  const int plot_w = width - margin_left - 30;
  const int plot_h = height - margin_top - margin_bottom;

  double peak = 1;
  for (const auto& r : rows) peak = std::max(peak, r.mean_ns + r.stddev_ns);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title
      << "</text>\n";
  svg << "<line x1=\"" << margin_left << "\" y1=\"" << margin_top + plot_h
      << "\" x2=\"" << margin_left + plot_w << "\" y2=\""
      << margin_top + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << margin_left << "\" y1=\"" << margin_top
      << "\" x2=\"" << margin_left << "\" y2=\"" << margin_top + plot_h
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"16\" y=\"" << margin_top + plot_h / 2
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 16 " << margin_top + plot_h / 2
      << ")\" text-anchor=\"middle\">mean RTT (us)</text>\n";

  const size_t n = rows.size();
  if (n > 0) {
    const double slot = static_cast<double>(plot_w) / static_cast<double>(n);
    const double bar_w = slot * 0.6;
    for (size_t i = 0; i < n; ++i) {
      const auto& r = rows[i];
      const double x =
          margin_left + slot * static_cast<double>(i) + (slot - bar_w) / 2;
      const double h = r.mean_ns / peak * plot_h;
      const double y = margin_top + plot_h - h;
      const char* fill = r.qos ? "#2b8a3e" : "#adb5bd";
      svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bar_w
          << "\" height=\"" << h << "\" fill=\"" << fill << "\"/>\n";
      // stddev whisker
      const double cx = x + bar_w / 2;
      const double wy1 =
          margin_top + plot_h -
          std::min(1.0, (r.mean_ns + r.stddev_ns) / peak) * plot_h;
      const double wy2 = margin_top + plot_h -
                         std::max(0.0, (r.mean_ns - r.stddev_ns) / peak) *
                             plot_h;
      svg << "<line x1=\"" << cx << "\" y1=\"" << wy1 << "\" x2=\"" << cx
          << "\" y2=\"" << wy2 << "\" stroke=\"black\"/>\n";
      char label[96];
      std::snprintf(label, sizeof(label), "%s %s f=%g %s/%s",
                    r.scenario.c_str(), r.qos ? "qos" : "normal",
                    r.load_fraction, r.probe_carrier.c_str(),
                    r.load_carrier.c_str());
      svg << "<text x=\"" << cx << "\" y=\"" << margin_top + plot_h + 14
          << "\" font-family=\"sans-serif\" font-size=\"10\" "
          << "text-anchor=\"end\" transform=\"rotate(-45 " << cx << " "
          << margin_top + plot_h + 14 << ")\">" << label << "</text>\n";
      char value[32];
      std::snprintf(value, sizeof(value), "%.1f", r.mean_ns / 1000.0);
      svg << "<text x=\"" << cx << "\" y=\"" << y - 4
          << "\" font-family=\"sans-serif\" font-size=\"10\" "
          << "text-anchor=\"middle\">" << value << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace prioport::bench
