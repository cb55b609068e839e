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

#include <functional>
#include <queue>
#include <string>
#include <vector>

#include "emu/band_queue.hpp"
#include "emu/topology.hpp"

namespace prioport::emu {

// One packet handed to the engine together with its virtual admission time
// and the admitting channel thread's drain weight.
struct Admission {
  uint64_t t_ns = 0;
  int weight = 0;  // 0..99; higher weight enters the source queue first
  EmuPacket packet;
};

struct Delivery {
  EmuPacket packet;
  uint64_t delivered_ns = 0;
};

struct AckRecord {
  uint64_t flow = 0;
  uint64_t message_id = 0;
  uint64_t delivered_ns = 0;
};

// Single-threaded discrete-event engine over a Topology. Virtual time only;
// identical admissions yield identical traces.
//
// Event ordering at equal virtual time: admissions and arrivals are
// processed before transmit completions (so a packet admitted exactly when
// a wire frees up competes for that slot), same-time admissions at one host
// are ordered by descending weight, and any remaining tie falls back to
// scheduling order.
class Engine {
 public:
  explicit Engine(Topology topo);

  // Batch interface: sorts the admissions by (time, weight descending,
  // flow, message, segment) regardless of collection order, then runs the
  // event loop to quiescence. May be called repeatedly; times must not
  // precede the current virtual clock.
  void run(std::vector<Admission> admissions);

  // Incremental interface for live channels: admits at the current virtual
  // time; with drain_now it processes every consequent event before
  // returning. Burst admitters pass drain_now=false per packet and call
  // drain_all() once.
  void admit_now(EmuPacket p, int weight, bool drain_now = true);
  void drain_all();

  // Invoked at each delivery (acknowledgments included). Runs inside the
  // event loop; must not call back into the engine.
  void set_delivery_sink(std::function<void(const Delivery&)> sink);

  // Engine-generated acknowledgments: on delivering a want_ack packet, a
  // reverse packet of ack_size_bytes is admitted at the delivery time. Used
  // by batch runs where no live receiver exists.
  void set_auto_ack(bool on) { auto_ack_ = on; }

  void set_record_deliveries(bool on) { record_deliveries_ = on; }
  void set_record_trace(bool on) { record_trace_ = on; }

  // Replaces every wire's per-band queue capacity. Only valid before the
  // first admission.
  void set_queue_capacity(size_t per_band);

  // Grow the topology without disturbing engine state (existing queues,
  // clock, traffic in flight). New wires receive the configured capacity.
  uint32_t add_host(const std::string& name);
  void add_link(const std::string& a, const std::string& b,
                uint64_t rate_bytes_per_sec = kDefaultRateBytesPerSec,
                uint64_t propagation_delay_ns = 0);

  uint64_t now_ns() const { return now_; }
  const std::vector<Delivery>& deliveries() const { return deliveries_; }
  const std::vector<AckRecord>& acks() const { return acks_; }

  uint64_t wire_drops(uint32_t wire) const;
  uint64_t wire_band_drops(uint32_t wire, int band) const;
  uint64_t total_drops() const;
  const Topology& topology() const { return topo_; }

  // One row per admitted packet:
  //   packet_id,tos,band,enqueue_ns,delivery_ns,dropped
  // delivery_ns is empty for dropped packets.
  std::string trace_csv() const;

 private:
  struct Event {
    uint64_t t = 0;
    uint8_t rank = 0;    // 0 = admit/arrive, 1 = transmit done
    uint16_t wkey = 0;   // source admissions 255-weight, arrivals 512
    uint64_t seq = 0;
    enum class Kind : uint8_t { Arrive, TransmitDone } kind = Kind::Arrive;
    uint32_t where = 0;   // Arrive: node, TransmitDone: wire
    bool fresh = false;   // first admission of this packet (assign id, trace)
    EmuPacket packet;     // Arrive only
  };

  struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
      return std::tie(a.t, a.rank, a.wkey, a.seq) >
             std::tie(b.t, b.rank, b.wkey, b.seq);
    }
  };

  struct WireState {
    BandQueue queue;
    bool busy = false;
  };

  struct TraceRow {
    uint64_t packet_id = 0;
    uint8_t tos = 0;
    int band = 1;
    uint64_t enqueue_ns = 0;
    uint64_t delivery_ns = 0;
    bool dropped = false;
    bool delivered = false;
  };

  static constexpr uint16_t kArrivalWkey = 512;

  void ingest(EmuPacket p, uint64_t t);
  void handle_at_node(uint32_t node, EmuPacket p, uint64_t t);
  void try_start(uint32_t wire, uint64_t t);
  void deliver(EmuPacket p, uint64_t t);
  void drain();
  void step_one();
  uint64_t serialization_ns(uint32_t size_bytes, uint64_t rate) const;

  Topology topo_;
  std::vector<WireState> wires_;
  size_t queue_capacity_ = BandQueue::kDefaultBandCapacity;
  std::priority_queue<Event, std::vector<Event>, EventAfter> heap_;
  uint64_t now_ = 0;
  uint64_t next_seq_ = 0;
  uint64_t next_packet_id_ = 0;
  bool running_ = false;
  bool auto_ack_ = false;
  bool record_deliveries_ = true;
  bool record_trace_ = true;

  std::function<void(const Delivery&)> sink_;
  std::vector<Delivery> deliveries_;
  std::vector<AckRecord> acks_;
  std::vector<TraceRow> trace_;
};

}  // namespace prioport::emu
