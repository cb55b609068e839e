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
#include <span>
#include <string>
#include <vector>

#include "emu/topology.hpp"
#include "port/port.hpp"

namespace prioport::bench {

// One acknowledged probe message. All times come from the sender's clock:
// virtual nanoseconds in emulated runs, monotonic nanoseconds otherwise,
// so no cross-host clock agreement is ever needed.
struct RttSample {
  uint64_t message_id = 0;
  uint64_t send_ns = 0;
  uint64_t ack_ns = 0;
  uint64_t rtt_ns = 0;  // ack_ns - send_ns, always positive
};

struct Summary {
  double mean_ns = 0;
  double stddev_ns = 0;  // population formula, divisor n
  size_t n = 0;
};

// Arithmetic mean and population standard deviation of rtt_ns.
// Throws Error{empty_sample_set}.
Summary summarize(std::span<const RttSample> samples);

struct ProbeSpec {
  size_t size_bytes = 1024;
  double rate_hz = 100.0;
  size_t count = 300;   // samples are reported from these only
  size_t warmup = 100;  // sent first at the same rate, then discarded
  int ack_timeout_ms = 2000;  // live runs: grace period after the last send
};

struct ProbeResult {
  std::vector<RttSample> samples;
  // Counted probes whose acknowledgment never arrived. Duplicate
  // acknowledgments are discarded and counted by the channel itself.
  uint64_t drops = 0;
};

// Sends warmup+count ack-requested messages at rate_hz over src's existing
// channel to dst and reports the round trips that completed. An emulated
// channel runs one collect/replay cycle on the port's world, making every
// timestamp virtual and the result deterministic; real carriers pace
// against the monotonic clock.
// Throws Error{no_such_channel}, Error{channel_down}, Error{zero_acks}.
ProbeResult run_rtt_probe(port::Port& src, const std::string& dst,
                          const ProbeSpec& spec);

struct LoadSpec {
  double fraction = 0.7;  // of link_bytes_per_sec; 0 < f <= 1, 0 = no load
  size_t message_size_bytes = 32 * 1024;
  std::string carrier;  // informational; the channel to dst decides
  // Declared bandwidth the fraction refers to.
  uint64_t link_bytes_per_sec = emu::kDefaultRateBytesPerSec;
};

struct LoadReport {
  double target_bytes_per_sec = 0;
  double achieved_bytes_per_sec = 0;
  double achieved_fraction = 0;  // of target; 1 when target is zero
  uint64_t messages = 0;
  // False when achieved < 90% of target. Reported, never fatal.
  bool sustained = true;
};

// Sustains fraction x bandwidth of wire bytes toward dst for the duration.
// The emitted rate stays within +-5% of target over any 1-second window
// because messages follow an absolute schedule, not accumulated sleeps.
// duration_s == 0 reports an empty success.
LoadReport run_load(port::Port& src, const std::string& dst,
                    const LoadSpec& spec, double duration_s);

struct ScenarioConfig {
  std::string scenario = "nic";  // "nic" | "switch"
  bool qos = false;
  double load_fraction = 0.7;
  std::string probe_carrier = "tcp";  // "tcp" | "udp"
  std::string load_carrier = "tcp";
  // Emulated runs are deterministic and carry all timing in virtual time;
  // real-socket runs are advisory and host-dependent.
  bool emulate = true;
  uint64_t seed = 1;  // schedule seed; qos never feeds into it
  size_t probe_size_bytes = 0;  // 0 = scenario default (1 KiB nic, 32 KiB switch)
  double probe_rate_hz = 100.0;
  size_t probe_count = 300;
  size_t probe_warmup = 100;
  size_t load_message_bytes = 32 * 1024;
  uint64_t link_bytes_per_sec = emu::kDefaultRateBytesPerSec;
  std::string topology_file;  // optional emulated-topology override
  std::string nameserver;     // real mode: reuse this server; empty spins one
};

struct ReportRow {
  std::string scenario;
  bool qos = false;
  double load_fraction = 0;
  std::string probe_carrier;
  std::string load_carrier;
  size_t n = 0;
  double mean_ns = 0;
  double stddev_ns = 0;
  uint64_t drops = 0;
};

std::string csv_header();
std::string csv_row(const ReportRow& row);

// Wires up one topology (co-hosted publishers for "nic", separate hosts
// behind one switch egress for "switch"), applies QoS to the measurement
// channel when asked (thread FIFO/30 plus High packet marking), runs load
// and probe over the same window, and summarizes.
ReportRow run_scenario(const ScenarioConfig& config);

// Grouped bars (mean with a stddev whisker), one group per row.
std::string render_svg_plot(std::span<const ReportRow> rows,
                            const std::string& title);

}  // namespace prioport::bench
