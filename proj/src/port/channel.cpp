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

#include "port/channel.hpp"

#include <sys/socket.h>

#include <chrono>
#include <span>
#include <utility>

#include "common/clock.hpp"
#include "common/error.hpp"
#include "wire/frame_io.hpp"

namespace prioport::port {

namespace {

// Lock ordering note: the emulator world lock sits above every channel-local
// lock. Sinks registered with the world run under its lock and only touch
// channel leaf state; channel threads never hold a leaf lock while calling
// into the world.

void discard_pending_bytes(const net::Fd& fd) {
  uint8_t junk[256];
  while (::recv(fd.get(), junk, sizeof junk, MSG_DONTWAIT) > 0) {
  }
}

}  // namespace

ChannelBase::ChannelBase(std::string local_port, std::string peer,
                         std::string carrier, qos::SchedApplier* applier)
    : local_port_(std::move(local_port)),
      peer_(std::move(peer)),
      carrier_(std::move(carrier)),
      applier_(applier != nullptr ? applier : &qos::system_sched_applier()) {}

void ChannelBase::request_stop() {
  if (stop_.exchange(true)) return;
  on_stop_requested();
}

void ChannelBase::join() {
  if (thread_.joinable()) thread_.join();
}

void ChannelBase::start_thread(std::function<void()> body) {
  running_.store(true);
  thread_ = std::thread([this, body = std::move(body)] {
    body();
    running_.store(false);
    // A loop that exits on its own (peer EOF, transport death) must leave
    // the channel in the stopped state, or publishes would keep feeding a
    // dead queue and status() would keep reading "active".
    request_stop();
  });
}

std::string ChannelBase::set_sched(qos::SchedPolicy policy, int priority) {
  qos::validate_sched(policy, priority);
  std::lock_guard lock(qos_mu_);
  std::string reason;
  if (thread_.joinable()) {
    reason = applier_->apply(thread_.native_handle(), policy, priority);
  } else {
    reason = "thread-not-running";
  }
  sched_.policy = policy;
  sched_.priority = priority;
  sched_.applied = reason.empty();
  sched_.degraded_reason = reason;
  // The emulated carrier drains by this weight regardless of whether the OS
  // accepted the thread change, so prioritization stays testable without
  // real-time privileges.
  weight_.store(qos::sched_weight(sched_));
  return reason;
}

qos::SchedulingProperties ChannelBase::sched() const {
  std::lock_guard lock(qos_mu_);
  return sched_;
}

std::string ChannelBase::set_packet_priority(qos::PriorityClass c) {
  const uint8_t tos = qos::dscp_to_tos(qos::class_to_dscp(c));
  priority_class_.store(static_cast<int>(c));
  tos_.store(tos);
  std::lock_guard lock(qos_mu_);
  qos_degraded_.clear();
  return "";
}

CounterSnapshot ChannelBase::counters() const {
  CounterSnapshot s;
  s.enqueued = counters_.enqueued.load();
  s.sent = counters_.sent.load();
  s.received = counters_.received.load();
  s.dropped = counters_.dropped.load();
  s.acks = counters_.acks.load();
  s.duplicate_acks = counters_.duplicate_acks.load();
  s.queued = queued_now();
  return s;
}

std::string ChannelBase::status() const {
  if (stop_.load()) return "closed";
  std::lock_guard lock(qos_mu_);
  if (!sched_.applied || !qos_degraded_.empty()) return "degraded";
  return "active";
}

OutputChannel::OutputChannel(Init init)
    : ChannelBase(std::move(init.local_port), std::move(init.peer),
                  std::move(init.carrier), init.applier),
      conn_(std::move(init.conn)),
      udp_sock_(std::move(init.udp_sock)),
      udp_peer_host_(std::move(init.udp_peer_host)),
      udp_peer_port_(init.udp_peer_port),
      world_(std::move(init.world)),
      flow_(init.flow),
      queue_(init.qlen),
      queue_event_(net::make_event_fd()) {}

OutputChannel::~OutputChannel() {
  request_stop();
  join();
}

void OutputChannel::start() {
  if (wire::is_emu_carrier(carrier_)) {
    world_->set_ack_sink(flow_, [this](uint64_t message_id, uint64_t ack_ns) {
      // Collect replays carry meaningful virtual times; live acknowledgments
      // are stamped against the wall clock their senders used.
      const uint64_t end = world_->mode() == emu::World::Mode::Collect
                               ? ack_ns
                               : mono_ns();
      on_ack(message_id, end);
    });
    stall_flag_ = world_->stall_flag(flow_);
    start_thread([this] { run_emu(); });
  } else if (carrier_ == wire::kCarrierUdp) {
    start_thread([this] { run_udp(); });
  } else {
    start_thread([this] { run_tcp(); });
  }
}

void OutputChannel::enqueue(OutMessage m) {
  counters_.enqueued.fetch_add(1);
  if (stop_.load()) {
    counters_.dropped.fetch_add(1);
    return;
  }
  const size_t evicted = queue_.push(std::move(m));
  counters_.dropped.fetch_add(evicted);
  net::event_signal(queue_event_);
}

void OutputChannel::set_ack_observer(AckObserver observer) {
  std::lock_guard lock(ack_mu_);
  observer_ = std::move(observer);
}

std::string OutputChannel::set_packet_priority(qos::PriorityClass c) {
  ChannelBase::set_packet_priority(c);
  std::string reason;
  if (carrier_ == wire::kCarrierTcp) {
    reason = net::set_socket_tos(conn_, tos_.load());
  } else if (carrier_ == wire::kCarrierUdp) {
    reason = net::set_socket_tos(udp_sock_, tos_.load());
  }
  // Emulated carriers mark per packet from tos_, nothing to apply here.
  if (!reason.empty()) {
    std::lock_guard lock(qos_mu_);
    qos_degraded_ = reason;
  }
  return reason;
}

size_t OutputChannel::set_qlen(size_t capacity) {
  const size_t evicted = queue_.set_capacity(capacity);
  counters_.dropped.fetch_add(evicted);
  return evicted;
}

bool OutputChannel::flush(int timeout_ms) {
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::milliseconds(timeout_ms < 0 ? 0 : timeout_ms);
  for (;;) {
    if (counters_.enqueued.load() ==
        counters_.sent.load() + counters_.dropped.load()) {
      return true;
    }
    if (timeout_ms >= 0 && std::chrono::steady_clock::now() >= deadline) {
      return false;
    }
    std::this_thread::sleep_for(std::chrono::microseconds(200));
  }
}

ChannelInfo OutputChannel::info() const {
  ChannelInfo i;
  i.peer = peer_;
  i.carrier = carrier_;
  i.direction = "output";
  i.sched = sched();
  i.priority = packet_priority();
  {
    std::lock_guard lock(qos_mu_);
    i.qos_degraded = qos_degraded_;
  }
  i.counters = counters();
  i.qlen = queue_.capacity();
  i.status = status();
  return i;
}

void OutputChannel::on_stop_requested() {
  net::event_signal(queue_event_);
  queue_.notify();
  if (conn_.valid()) net::shutdown_both(conn_);
  if (udp_sock_.valid()) net::shutdown_both(udp_sock_);
  if (world_) world_->close_flow(flow_);
}

void OutputChannel::drain_remaining_as_dropped() {
  while (queue_.try_pop().has_value()) {
    counters_.dropped.fetch_add(1);
  }
}

void OutputChannel::handle_ack_frame(uint64_t message_id) {
  on_ack(message_id, mono_ns());
}

void OutputChannel::on_ack(uint64_t message_id, uint64_t end_ns) {
  AckObserver observer;
  uint64_t send_ns = 0;
  {
    std::lock_guard lock(ack_mu_);
    auto it = pending_.find(message_id);
    if (it == pending_.end()) {
      counters_.duplicate_acks.fetch_add(1);
      return;
    }
    send_ns = it->second;
    pending_.erase(it);
    observer = observer_;
  }
  counters_.acks.fetch_add(1);
  if (observer) observer(message_id, send_ns, end_ns);
}

void OutputChannel::note_pending(const OutMessage& m) {
  if (!m.want_ack) return;
  std::lock_guard lock(ack_mu_);
  pending_[m.message_id] = m.timestamp_ns;
}

bool OutputChannel::transmit_tcp(const OutMessage& m) {
  // Registered before the bytes leave so a fast acknowledgment cannot race
  // the bookkeeping.
  note_pending(m);
  try {
    net::send_all(conn_, std::span(m.frame_bytes->data(), m.frame_bytes->size()));
  } catch (const Error&) {
    {
      std::lock_guard lock(ack_mu_);
      pending_.erase(m.message_id);
    }
    counters_.dropped.fetch_add(1);
    return false;
  }
  counters_.sent.fetch_add(1);
  return true;
}

bool OutputChannel::transmit_udp(const OutMessage& m) {
  if (m.frame_bytes->size() > wire::kUdpMaxFrameBytes) {
    counters_.dropped.fetch_add(1);
    return true;
  }
  note_pending(m);
  try {
    net::udp_send(udp_sock_, udp_peer_host_, udp_peer_port_,
                  std::span(m.frame_bytes->data(), m.frame_bytes->size()));
  } catch (const Error&) {
    // Lossy carrier: a refused datagram costs the message, not the channel.
    {
      std::lock_guard lock(ack_mu_);
      pending_.erase(m.message_id);
    }
    counters_.dropped.fetch_add(1);
    return true;
  }
  counters_.sent.fetch_add(1);
  return true;
}

bool OutputChannel::transmit_emu(const OutMessage& m) {
  if (carrier_ == wire::kCarrierEmuUdp &&
      m.frame_bytes->size() > wire::kUdpMaxFrameBytes) {
    counters_.dropped.fetch_add(1);
    return true;
  }
  note_pending(m);
  emu::World::SendOpts opts;
  opts.tos = tos_.load();
  opts.weight = weight_.load();
  opts.want_ack = m.want_ack;
  opts.message_id = m.message_id;
  opts.virtual_t_ns = m.timestamp_ns;
  try {
    world_->send(flow_, m.frame_bytes, opts);
  } catch (const Error&) {
    {
      std::lock_guard lock(ack_mu_);
      pending_.erase(m.message_id);
    }
    counters_.dropped.fetch_add(1);
    return false;
  }
  counters_.sent.fetch_add(1);
  return true;
}

void OutputChannel::run_tcp() {
  for (;;) {
    if (stop_.load()) break;
    const int mask = net::poll_readable2(conn_, queue_event_, 100);
    if (stop_.load()) break;
    if (mask & 1) {
      try {
        auto f = wire::recv_frame(conn_);
        if (!f) break;
        if (f->type == wire::FrameType::Ack) handle_ack_frame(f->message_id);
      } catch (const Error&) {
        break;
      }
    }
    if (mask & 2) net::event_drain(queue_event_);
    bool alive = true;
    for (;;) {
      auto m = queue_.try_pop();
      if (!m) break;
      if (!transmit_tcp(*m)) {
        alive = false;
        break;
      }
    }
    if (!alive) break;
  }
  drain_remaining_as_dropped();
}

void OutputChannel::run_udp() {
  std::vector<uint8_t> buf;
  for (;;) {
    if (stop_.load()) break;
    const int mask = net::poll_many({&conn_, &udp_sock_, &queue_event_}, 100);
    if (stop_.load()) break;
    if (mask & 1) {
      // The control connection carries nothing after the handshake; traffic
      // there means teardown (or noise to discard).
      if (net::peer_closed(conn_)) break;
      discard_pending_bytes(conn_);
    }
    if (mask & 2) {
      buf.resize(wire::kUdpMaxFrameBytes + 64);
      try {
        auto n = net::udp_recv(udp_sock_, &buf, 0);
        if (n) {
          auto dr = wire::decode_frame(std::span(buf.data(), *n));
          if (dr.status == wire::DecodeStatus::ok &&
              dr.frame.type == wire::FrameType::Ack) {
            handle_ack_frame(dr.frame.message_id);
          }
        }
      } catch (const Error&) {
        break;
      }
    }
    if (mask & 4) net::event_drain(queue_event_);
    bool alive = true;
    for (;;) {
      auto m = queue_.try_pop();
      if (!m) break;
      if (!transmit_udp(*m)) {
        alive = false;
        break;
      }
    }
    if (!alive) break;
  }
  drain_remaining_as_dropped();
}

void OutputChannel::run_emu() {
  // Messages on a stalled link must stay in the bounded queue where the
  // overflow accounting lives, so the write gate is checked both before the
  // wait and atomically at every pop.
  const auto writable = [this] {
    return !stall_flag_ || !stall_flag_->load();
  };
  for (;;) {
    if (stop_.load()) break;
    if (!world_->wait_writable(flow_, stop_)) break;
    auto m = queue_.pop_wait_when(stop_, writable, 100);
    if (stop_.load()) break;
    if (!m) {
      if (conn_.valid() && net::peer_closed(conn_)) break;
      continue;
    }
    if (!transmit_emu(*m)) break;
  }
  drain_remaining_as_dropped();
}

InputChannel::InputChannel(Init init)
    : ChannelBase(std::move(init.local_port), std::move(init.peer),
                  std::move(init.carrier), init.applier),
      conn_(std::move(init.conn)),
      udp_sock_(std::move(init.udp_sock)),
      udp_peer_host_(std::move(init.udp_peer_host)),
      udp_peer_port_(init.udp_peer_port),
      world_(std::move(init.world)),
      flow_(init.flow),
      read_queue_(init.qlen) {}

InputChannel::~InputChannel() {
  request_stop();
  join();
}

void InputChannel::start() {
  if (wire::is_emu_carrier(carrier_)) {
    world_->set_data_sink(flow_, [this](const emu::World::Delivered& d) {
      counters_.received.fetch_add(1);
      if (!d.live) return;
      {
        std::lock_guard lock(inbox_mu_);
        inbox_.push_back(EmuInbox{d.frame, d.tos, d.ack_size_bytes});
      }
      inbox_cv_.notify_one();
    });
    start_thread([this] { run_emu(); });
  } else if (carrier_ == wire::kCarrierUdp) {
    start_thread([this] { run_udp(); });
  } else {
    start_thread([this] { run_tcp(); });
  }
}

void InputChannel::set_delivery_callback(std::function<void()> callback) {
  std::lock_guard lock(callback_mu_);
  delivery_callback_ = std::move(callback);
}

std::string InputChannel::set_packet_priority(qos::PriorityClass c) {
  ChannelBase::set_packet_priority(c);
  std::string reason;
  if (carrier_ == wire::kCarrierTcp) {
    reason = net::set_socket_tos(conn_, tos_.load());
  } else if (carrier_ == wire::kCarrierUdp) {
    reason = net::set_socket_tos(udp_sock_, tos_.load());
  }
  if (!reason.empty()) {
    std::lock_guard lock(qos_mu_);
    qos_degraded_ = reason;
  }
  return reason;
}

size_t InputChannel::set_qlen(size_t capacity) {
  const size_t evicted = read_queue_.set_capacity(capacity);
  counters_.dropped.fetch_add(evicted);
  return evicted;
}

ChannelInfo InputChannel::info() const {
  ChannelInfo i;
  i.peer = peer_;
  i.carrier = carrier_;
  i.direction = "input";
  i.sched = sched();
  i.priority = packet_priority();
  {
    std::lock_guard lock(qos_mu_);
    i.qos_degraded = qos_degraded_;
  }
  i.counters = counters();
  i.qlen = read_queue_.capacity();
  i.status = status();
  return i;
}

void InputChannel::on_stop_requested() {
  if (conn_.valid()) net::shutdown_both(conn_);
  if (udp_sock_.valid()) net::shutdown_both(udp_sock_);
  inbox_cv_.notify_all();
  read_queue_.notify();
  if (world_) world_->close_flow(flow_);
}

bool InputChannel::handle_data_frame(wire::Frame f) {
  const bool want_ack = f.ack_requested();
  ReadResult r;
  r.payload = std::move(f.payload);
  r.source = peer_;
  r.message_id = f.message_id;
  r.timestamp_ns = f.timestamp_ns;
  deliver(std::move(r));
  return want_ack;
}

void InputChannel::deliver(ReadResult r) {
  const size_t evicted = read_queue_.push(std::move(r));
  counters_.dropped.fetch_add(evicted);
  std::function<void()> callback;
  {
    std::lock_guard lock(callback_mu_);
    callback = delivery_callback_;
  }
  if (callback) callback();
}

void InputChannel::run_tcp() {
  for (;;) {
    if (stop_.load()) break;
    std::optional<wire::Frame> f;
    try {
      f = wire::recv_frame(conn_);
    } catch (const Error&) {
      break;
    }
    if (!f) break;
    if (f->type != wire::FrameType::Data) continue;
    counters_.received.fetch_add(1);
    const uint64_t id = f->message_id;
    const uint64_t ts = f->timestamp_ns;
    if (handle_data_frame(std::move(*f))) {
      try {
        wire::send_frame(conn_, wire::make_ack(id, ts));
      } catch (const Error&) {
        break;
      }
    }
  }
}

void InputChannel::run_udp() {
  std::vector<uint8_t> buf;
  for (;;) {
    if (stop_.load()) break;
    const int mask = net::poll_many({&conn_, &udp_sock_}, 100);
    if (stop_.load()) break;
    if (mask & 1) {
      if (net::peer_closed(conn_)) break;
      discard_pending_bytes(conn_);
    }
    if ((mask & 2) == 0) continue;
    buf.resize(wire::kUdpMaxFrameBytes + 64);
    std::optional<size_t> n;
    try {
      n = net::udp_recv(udp_sock_, &buf, 0);
    } catch (const Error&) {
      break;
    }
    if (!n) continue;
    auto dr = wire::decode_frame(std::span(buf.data(), *n));
    if (dr.status != wire::DecodeStatus::ok ||
        dr.frame.type != wire::FrameType::Data) {
      continue;
    }
    counters_.received.fetch_add(1);
    const uint64_t id = dr.frame.message_id;
    const uint64_t ts = dr.frame.timestamp_ns;
    if (handle_data_frame(std::move(dr.frame))) {
      const auto ack = wire::encode_frame(wire::make_ack(id, ts));
      try {
        net::udp_send(udp_sock_, udp_peer_host_, udp_peer_port_,
                      std::span(ack.data(), ack.size()));
      } catch (const Error&) {
        // Lossy carrier: the sender retries nothing, the ack is just gone.
      }
    }
  }
}

void InputChannel::run_emu() {
  for (;;) {
    std::vector<EmuInbox> batch;
    {
      std::unique_lock lock(inbox_mu_);
      inbox_cv_.wait_for(lock, std::chrono::milliseconds(100), [&] {
        return stop_.load() || !inbox_.empty();
      });
      if (stop_.load()) break;
      batch.swap(inbox_);
    }
    if (batch.empty()) {
      if (conn_.valid() && net::peer_closed(conn_)) break;
      continue;
    }
    for (auto& item : batch) {
      if (!item.frame) continue;
      auto dr = wire::decode_frame(std::span(item.frame->data(), item.frame->size()));
      if (dr.status != wire::DecodeStatus::ok ||
          dr.frame.type != wire::FrameType::Data) {
        continue;
      }
      const uint64_t id = dr.frame.message_id;
      if (handle_data_frame(std::move(dr.frame))) {
        // The acknowledgment mirrors the final segment and inherits its TOS.
        try {
          world_->send_ack(flow_, id, item.tos, item.ack_size);
        } catch (const Error&) {
        }
      }
    }
  }
}

}  // namespace prioport::port
