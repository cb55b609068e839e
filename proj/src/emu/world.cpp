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

#include "emu/world.hpp"

#include <chrono>
#include <random>
#include <sstream>

#include "common/error.hpp"

namespace prioport::emu {

namespace {

std::string random_token() {
  std::random_device rd;
  std::ostringstream out;
  out << std::hex << rd() << rd();
  return out.str();
}

}  // namespace

World::World() : World(Topology{}) {}

World::World(Topology topo)
    : engine_(std::move(topo)), token_(random_token()) {
  engine_.set_delivery_sink([this](const Delivery& d) { dispatch(d); });
}

const std::shared_ptr<World>& World::default_world() {
  static std::shared_ptr<World> world = std::make_shared<World>();
  return world;
}

bool World::has_host(const std::string& host) const {
  std::lock_guard lock(mu_);
  return engine_.topology().has_node(host);
}

void World::ensure_route_locked(const std::string& src_host,
                                const std::string& dst_host) {
  if (!engine_.topology().has_node(src_host)) engine_.add_host(src_host);
  if (!engine_.topology().has_node(dst_host)) engine_.add_host(dst_host);
  if (src_host == dst_host) return;
  const uint32_t src = engine_.topology().node(src_host);
  const uint32_t dst = engine_.topology().node(dst_host);
  try {
    engine_.topology().next_wire(src, dst);
  } catch (const Error&) {
    engine_.add_link(src_host, dst_host);
  }
}

void World::ensure_route(const std::string& src_host,
                         const std::string& dst_host) {
  std::lock_guard lock(mu_);
  ensure_route_locked(src_host, dst_host);
}

World::FlowState& World::flow_at(uint64_t id) {
  auto it = flows_.find(id);
  if (it == flows_.end()) {
    raise(Errc::no_such_channel, "unknown emu flow " + std::to_string(id));
  }
  return it->second;
}

uint64_t World::open_flow(const std::string& src_host,
                          const std::string& dst_host,
                          const wire::CarrierProfile& profile) {
  std::lock_guard lock(mu_);
  ensure_route_locked(src_host, dst_host);
  FlowState state;
  state.src_node = engine_.topology().node(src_host);
  state.dst_node = engine_.topology().node(dst_host);
  state.profile = profile;
  const uint64_t id = next_flow_++;
  flows_.emplace(id, std::move(state));
  return id;
}

void World::close_flow(uint64_t flow) {
  std::lock_guard lock(mu_);
  flows_.erase(flow);
  stall_cv_.notify_all();
}

void World::set_data_sink(uint64_t flow, DataSink sink) {
  std::lock_guard lock(mu_);
  flow_at(flow).data_sink = std::move(sink);
}

void World::set_ack_sink(uint64_t flow, AckSink sink) {
  std::lock_guard lock(mu_);
  flow_at(flow).ack_sink = std::move(sink);
}

uint32_t World::send(uint64_t flow,
                     std::shared_ptr<const std::vector<uint8_t>> frame_bytes,
                     const SendOpts& opts) {
  std::lock_guard lock(mu_);
  FlowState& state = flow_at(flow);
  if (state.drop_all) return 0;

  const size_t frame_size = frame_bytes->size();
  const uint32_t count = wire::segment_count(state.profile, frame_size);
  const uint32_t final_wire_bytes = wire::segment_wire_bytes(
      state.profile, frame_size, count - 1, count);
  const bool collect = mode_.load() == Mode::Collect;

  for (uint32_t i = 0; i < count; ++i) {
    EmuPacket p;
    p.tos = opts.tos;
    p.size_bytes =
        wire::segment_wire_bytes(state.profile, frame_size, i, count);
    p.src = state.src_node;
    p.dst = state.dst_node;
    p.flow = flow;
    p.message_id = opts.message_id;
    p.segment = i;
    p.segment_count = count;
    p.want_ack = opts.want_ack && i + 1 == count;
    p.ack_size_bytes = final_wire_bytes;
    // Collect-mode sinks only count deliveries; dropping the payload
    // reference keeps a batched run's memory at the admission records, not
    // the full byte volume of every buffered frame.
    if (!collect) p.frame = frame_bytes;
    if (collect) {
      collected_.push_back({opts.virtual_t_ns, opts.weight, std::move(p)});
    } else {
      engine_.admit_now(std::move(p), opts.weight, false);
    }
  }
  if (!collect) engine_.drain_all();
  return count;
}

void World::send_ack(uint64_t flow, uint64_t message_id, uint8_t tos,
                     uint32_t size_bytes) {
  std::lock_guard lock(mu_);
  if (mode_.load() == Mode::Collect) return;
  FlowState& state = flow_at(flow);
  EmuPacket p;
  p.tos = tos;
  p.size_bytes = size_bytes;
  p.src = state.dst_node;
  p.dst = state.src_node;
  p.flow = flow;
  p.message_id = message_id;
  p.is_ack = true;
  engine_.admit_now(std::move(p), 0);
}

void World::set_stalled(uint64_t flow, bool on) {
  std::lock_guard lock(mu_);
  flow_at(flow).stalled->store(on);
  stall_cv_.notify_all();
}

bool World::wait_writable(uint64_t flow, const std::atomic<bool>& cancel) {
  std::unique_lock lock(mu_);
  for (;;) {
    if (cancel.load()) return false;
    auto it = flows_.find(flow);
    if (it == flows_.end() || !it->second.stalled->load()) return true;
    // cancel has no dedicated notifier; poll while stalled.
    stall_cv_.wait_for(lock, std::chrono::milliseconds(1));
  }
}

std::shared_ptr<const std::atomic<bool>> World::stall_flag(
    uint64_t flow) const {
  std::lock_guard lock(mu_);
  auto it = flows_.find(flow);
  if (it == flows_.end()) return nullptr;
  return it->second.stalled;
}

void World::set_drop_all(uint64_t flow, bool on) {
  std::lock_guard lock(mu_);
  flow_at(flow).drop_all = on;
}

void World::begin_collect() {
  std::lock_guard lock(mu_);
  mode_.store(Mode::Collect);
  collected_.clear();
  engine_.set_auto_ack(true);
}

void World::run_collected() {
  std::lock_guard lock(mu_);
  live_dispatch_ = false;
  engine_.run(std::move(collected_));
  collected_.clear();
  live_dispatch_ = true;
  engine_.set_auto_ack(false);
  mode_.store(Mode::Live);
}

void World::dispatch(const Delivery& d) {
  auto it = flows_.find(d.packet.flow);
  if (it == flows_.end()) return;
  FlowState& state = it->second;
  if (d.packet.is_ack) {
    if (state.ack_sink) state.ack_sink(d.packet.message_id, d.delivered_ns);
    return;
  }
  uint32_t& seen = state.seen_segments[d.packet.message_id];
  ++seen;
  if (seen < d.packet.segment_count) return;
  state.seen_segments.erase(d.packet.message_id);
  if (state.data_sink) {
    Delivered out;
    out.frame = d.packet.frame;
    out.delivered_ns = d.delivered_ns;
    out.tos = d.packet.tos;
    out.ack_size_bytes = d.packet.ack_size_bytes;
    out.live = live_dispatch_;
    state.data_sink(out);
  }
}

void World::set_record(bool deliveries, bool trace) {
  std::lock_guard lock(mu_);
  engine_.set_record_deliveries(deliveries);
  engine_.set_record_trace(trace);
}

void World::set_queue_capacity(size_t per_band) {
  std::lock_guard lock(mu_);
  engine_.set_queue_capacity(per_band);
}

uint64_t World::total_drops() const {
  std::lock_guard lock(mu_);
  return engine_.total_drops();
}

uint64_t World::now_ns() const {
  std::lock_guard lock(mu_);
  return engine_.now_ns();
}

std::string World::trace_csv() const {
  std::lock_guard lock(mu_);
  return engine_.trace_csv();
}

}  // namespace prioport::emu
