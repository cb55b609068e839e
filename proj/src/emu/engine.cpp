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

#include "emu/engine.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "qos/priority.hpp"

namespace prioport::emu {

namespace {

uint16_t admission_wkey(int weight) {
  const int w = std::clamp(weight, 0, 99);
  return static_cast<uint16_t>(255 - w);
}

}  // namespace

Engine::Engine(Topology topo) : topo_(std::move(topo)) {
  wires_.resize(topo_.wires().size());
}

void Engine::set_queue_capacity(size_t per_band) {
  if (next_packet_id_ != 0) {
    raise(Errc::io_error, "queue capacity must be set before admissions");
  }
  queue_capacity_ = per_band;
  for (auto& ws : wires_) ws.queue = BandQueue(per_band);
}

uint32_t Engine::add_host(const std::string& name) {
  return topo_.add_host(name);
}

void Engine::add_link(const std::string& a, const std::string& b,
                      uint64_t rate_bytes_per_sec,
                      uint64_t propagation_delay_ns) {
  topo_.add_link(a, b, rate_bytes_per_sec, propagation_delay_ns);
  while (wires_.size() < topo_.wires().size()) {
    wires_.emplace_back();
    wires_.back().queue = BandQueue(queue_capacity_);
  }
}

uint64_t Engine::serialization_ns(uint32_t size_bytes, uint64_t rate) const {
  const uint64_t numer = uint64_t{size_bytes} * 1'000'000'000ull;
  return (numer + rate - 1) / rate;
}

void Engine::run(std::vector<Admission> admissions) {
  if (running_) raise(Errc::io_error, "engine re-entered");
  running_ = true;

  std::sort(admissions.begin(), admissions.end(),
            [](const Admission& x, const Admission& y) {
              const uint16_t kx = admission_wkey(x.weight);
              const uint16_t ky = admission_wkey(y.weight);
              return std::tie(x.t_ns, kx, x.packet.flow, x.packet.message_id,
                              x.packet.segment) <
                     std::tie(y.t_ns, ky, y.packet.flow, y.packet.message_id,
                              y.packet.segment);
            });

  const uint64_t base_seq = next_seq_;
  next_seq_ += admissions.size();

  size_t aidx = 0;
  while (aidx < admissions.size() || !heap_.empty()) {
    bool take_admission;
    if (aidx >= admissions.size()) {
      take_admission = false;
    } else if (heap_.empty()) {
      take_admission = true;
    } else {
      const Admission& a = admissions[aidx];
      const Event& e = heap_.top();
      const uint8_t arank = 0;
      const uint16_t awkey = admission_wkey(a.weight);
      const uint64_t aseq = base_seq + aidx;
      take_admission = std::tie(a.t_ns, arank, awkey, aseq) <
                       std::tie(e.t, e.rank, e.wkey, e.seq);
    }
    if (take_admission) {
      Admission a = std::move(admissions[aidx++]);
      if (a.t_ns < now_) {
        running_ = false;
        raise(Errc::io_error, "admission time precedes the virtual clock");
      }
      now_ = a.t_ns;
      ingest(std::move(a.packet), a.t_ns);
    } else {
      step_one();
    }
  }
  running_ = false;
}

void Engine::admit_now(EmuPacket p, int weight, bool drain_now) {
  Event e;
  e.t = now_;
  e.rank = 0;
  e.wkey = admission_wkey(weight);
  e.seq = next_seq_++;
  e.kind = Event::Kind::Arrive;
  e.where = p.src;
  e.fresh = true;
  e.packet = std::move(p);
  heap_.push(std::move(e));
  if (drain_now) drain_all();
}

void Engine::drain_all() {
  if (running_) return;
  running_ = true;
  drain();
  running_ = false;
}

void Engine::set_delivery_sink(std::function<void(const Delivery&)> sink) {
  sink_ = std::move(sink);
}

void Engine::drain() {
  while (!heap_.empty()) step_one();
}

void Engine::step_one() {
  Event e = heap_.top();
  heap_.pop();
  now_ = e.t;
  if (e.kind == Event::Kind::TransmitDone) {
    wires_[e.where].busy = false;
    try_start(e.where, e.t);
  } else if (e.fresh) {
    ingest(std::move(e.packet), e.t);
  } else {
    handle_at_node(e.where, std::move(e.packet), e.t);
  }
}

void Engine::ingest(EmuPacket p, uint64_t t) {
  p.id = next_packet_id_++;
  if (record_trace_) {
    TraceRow row;
    row.packet_id = p.id;
    row.tos = p.tos;
    row.band = qos::tos_to_band(p.tos);
    row.enqueue_ns = t;
    trace_.push_back(row);
  }
  handle_at_node(p.src, std::move(p), t);
}

void Engine::handle_at_node(uint32_t node, EmuPacket p, uint64_t t) {
  if (node == p.dst) {
    deliver(std::move(p), t);
    return;
  }
  const uint32_t w = topo_.next_wire(node, p.dst);
  const uint64_t pid = p.id;
  p.enqueue_ns = t;
  if (!wires_[w].queue.enqueue(std::move(p)) && record_trace_ &&
      pid < trace_.size()) {
    trace_[pid].dropped = true;
  }
  try_start(w, t);
}

void Engine::try_start(uint32_t wire, uint64_t t) {
  WireState& ws = wires_[wire];
  if (ws.busy) return;
  auto p = ws.queue.dequeue();
  if (!p) return;
  ws.busy = true;

  const Wire& spec = topo_.wires()[wire];
  const uint64_t done = t + serialization_ns(p->size_bytes, spec.rate_bytes_per_sec);

  Event td;
  td.t = done;
  td.rank = 1;
  td.wkey = 0;
  td.seq = next_seq_++;
  td.kind = Event::Kind::TransmitDone;
  td.where = wire;
  heap_.push(std::move(td));

  Event ar;
  ar.t = done + spec.propagation_delay_ns;
  ar.rank = 0;
  ar.wkey = kArrivalWkey;
  ar.seq = next_seq_++;
  ar.kind = Event::Kind::Arrive;
  ar.where = spec.to;
  ar.packet = std::move(*p);
  heap_.push(std::move(ar));
}

void Engine::deliver(EmuPacket p, uint64_t t) {
  if (record_trace_ && p.id < trace_.size()) {
    trace_[p.id].delivered = true;
    trace_[p.id].delivery_ns = t;
  }
  if (p.is_ack) {
    acks_.push_back({p.flow, p.message_id, t});
  }

  const bool make_auto_ack = auto_ack_ && p.want_ack && !p.is_ack;
  EmuPacket ack;
  if (make_auto_ack) {
    ack.tos = p.tos;  // the reply inherits the forward channel's marking
    ack.size_bytes = p.ack_size_bytes;
    ack.src = p.dst;
    ack.dst = p.src;
    ack.flow = p.flow;
    ack.message_id = p.message_id;
    ack.is_ack = true;
  }

  const uint64_t delivered_at = t;
  if (record_deliveries_ && !p.is_ack) {
    deliveries_.push_back({p, delivered_at});
  }
  if (sink_) {
    const Delivery d{std::move(p), delivered_at};
    sink_(d);
  }

  if (make_auto_ack) {
    Event e;
    e.t = t;
    e.rank = 0;
    e.wkey = admission_wkey(0);
    e.seq = next_seq_++;
    e.kind = Event::Kind::Arrive;
    e.where = ack.src;
    e.fresh = true;
    e.packet = std::move(ack);
    heap_.push(std::move(e));
  }
}

uint64_t Engine::wire_drops(uint32_t wire) const {
  return wires_[wire].queue.total_drops();
}

uint64_t Engine::wire_band_drops(uint32_t wire, int band) const {
  return wires_[wire].queue.drops(band);
}

uint64_t Engine::total_drops() const {
  uint64_t n = 0;
  for (const auto& ws : wires_) n += ws.queue.total_drops();
  return n;
}

std::string Engine::trace_csv() const {
  std::string out = "packet_id,tos,band,enqueue_ns,delivery_ns,dropped\n";
  for (const TraceRow& r : trace_) {
    out += std::to_string(r.packet_id);
    out += ',';
    out += std::to_string(r.tos);
    out += ',';
    out += std::to_string(r.band);
    out += ',';
    out += std::to_string(r.enqueue_ns);
    out += ',';
    if (r.delivered) out += std::to_string(r.delivery_ns);
    out += ',';
    out += r.dropped ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace prioport::emu
