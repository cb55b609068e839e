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

#include <atomic>
#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "emu/engine.hpp"
#include "wire/profile.hpp"

namespace prioport::emu {

// The shared virtual network for every emu-carrier channel in one process.
// Channels open directed flows between named virtual hosts; the world
// segments encoded frames per the flow's carrier profile, admits them into
// the single-threaded Engine under one lock, and dispatches deliveries to
// per-flow sinks.
//
// Two modes:
//  - Live (default): each send is admitted at the current virtual instant
//    and the event loop runs to quiescence before send() returns. Frames
//    carry wall-clock timestamps; virtual time only fixes ordering and drop
//    behavior deterministically.
//  - Collect: sends are buffered with caller-provided virtual timestamps;
//    run_collected() replays the whole batch deterministically with
//    engine-generated acknowledgments. Benchmark runs use this mode, so
//    their reports are bit-stable across repetitions.
//
// Acknowledgment model: an emulated ACK mirrors the wire size of the final
// segment it acknowledges and inherits its TOS byte, which keeps round-trip
// times in closed form (an idle symmetric link yields exactly twice the
// one-way serialization).
class World {
 public:
  enum class Mode { Live, Collect };

  // Frame fully arrived (every segment). live=false during run_collected(),
  // where sinks should only update counters (the frame reference is null).
  struct Delivered {
    std::shared_ptr<const std::vector<uint8_t>> frame;
    uint64_t delivered_ns = 0;
    uint8_t tos = 0;              // for acknowledgment TOS inheritance
    uint32_t ack_size_bytes = 0;  // mirror of the final segment's wire size
    bool live = true;
  };
  using DataSink = std::function<void(const Delivered&)>;
  // Acknowledgment arrived back at the sending side.
  using AckSink = std::function<void(uint64_t message_id, uint64_t ack_ns)>;

  World();
  explicit World(Topology topo);

  World(const World&) = delete;
  World& operator=(const World&) = delete;

  // Process-wide world used when a port does not name one explicitly.
  static const std::shared_ptr<World>& default_world();

  // Random per-instance identity; emu handshakes compare it to reject
  // connects that straddle two worlds (separate processes).
  const std::string& token() const { return token_; }

  // Topology on demand: missing hosts are added; a direct link is created
  // only when no route exists yet (predeclared switch routes win).
  void ensure_route(const std::string& src_host, const std::string& dst_host);
  bool has_host(const std::string& host) const;

  // A flow is one directed channel between virtual hosts. Throws
  // Error{unknown_host} when no route can be ensured.
  uint64_t open_flow(const std::string& src_host, const std::string& dst_host,
                     const wire::CarrierProfile& profile);
  void close_flow(uint64_t flow);

  // Sinks run inside the event loop with the world lock held: they must not
  // call back into the world and should only touch leaf state (queues,
  // counters, condition variables).
  void set_data_sink(uint64_t flow, DataSink sink);
  void set_ack_sink(uint64_t flow, AckSink sink);

  struct SendOpts {
    uint8_t tos = 0;
    int weight = 0;
    bool want_ack = false;
    uint64_t message_id = 0;
    // Virtual admission time; Collect mode only (Live ignores it).
    uint64_t virtual_t_ns = 0;
  };

  // Segments and admits one encoded frame. Returns the number of admitted
  // link packets (0 when the flow is blackholed).
  uint32_t send(uint64_t flow,
                std::shared_ptr<const std::vector<uint8_t>> frame_bytes,
                const SendOpts& opts);

  // Reverse-path acknowledgment from a live receiver. No-op in Collect mode
  // (the engine generates acknowledgments there).
  void send_ack(uint64_t flow, uint64_t message_id, uint8_t tos,
                uint32_t size_bytes);

  // Per-flow write gate for decoupling tests: while stalled, wait_writable
  // blocks. Returns false when cancel was raised.
  void set_stalled(uint64_t flow, bool on);
  bool wait_writable(uint64_t flow, const std::atomic<bool>& cancel);
  // Lock-free view of the stall gate, so channel threads can consult it
  // from inside their own queue wait without ordering against the world
  // lock. Null for unknown flows; outlives close_flow.
  std::shared_ptr<const std::atomic<bool>> stall_flag(uint64_t flow) const;
  // Blackhole: sends are swallowed before admission.
  void set_drop_all(uint64_t flow, bool on);

  Mode mode() const { return mode_.load(); }
  void begin_collect();
  // Replays the collected admissions; engine acknowledgments are delivered
  // to ack sinks with virtual timestamps. Returns the world to Live mode.
  void run_collected();

  // Engine forwards (lock-taking).
  void set_record(bool deliveries, bool trace);
  void set_queue_capacity(size_t per_band);
  uint64_t total_drops() const;
  uint64_t now_ns() const;
  std::string trace_csv() const;

 private:
  struct FlowState {
    uint32_t src_node = 0;
    uint32_t dst_node = 0;
    wire::CarrierProfile profile;
    DataSink data_sink;
    AckSink ack_sink;
    std::shared_ptr<std::atomic<bool>> stalled =
        std::make_shared<std::atomic<bool>>(false);
    bool drop_all = false;
    // (message_id -> segments seen) for frames in flight; completed entries
    // are erased, entries of partially dropped frames linger harmlessly.
    std::map<uint64_t, uint32_t> seen_segments;
  };

  void dispatch(const Delivery& d);
  FlowState& flow_at(uint64_t id);
  void ensure_route_locked(const std::string& src_host,
                           const std::string& dst_host);

  mutable std::mutex mu_;
  std::condition_variable stall_cv_;
  Engine engine_;
  std::string token_;
  std::map<uint64_t, FlowState> flows_;
  uint64_t next_flow_ = 1;
  std::atomic<Mode> mode_{Mode::Live};
  std::vector<Admission> collected_;
  bool live_dispatch_ = true;
};

}  // namespace prioport::emu
