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
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "emu/world.hpp"
#include "net/socket.hpp"
#include "port/bounded_queue.hpp"
#include "qos/priority.hpp"
#include "qos/sched.hpp"
#include "wire/frame.hpp"
#include "wire/profile.hpp"

namespace prioport::port {

inline constexpr size_t kDefaultQueueCapacity = 64;

struct PublishOptions {
  bool want_ack = false;
  // 0 stamps the monotonic clock; benchmarks in emulated collect mode pass
  // virtual schedule times instead.
  uint64_t timestamp_ns = 0;
};

// One entry of an output channel's queue: the frame encoded once at
// publish() and shared across channels.
struct OutMessage {
  std::shared_ptr<const std::vector<uint8_t>> frame_bytes;
  uint64_t message_id = 0;
  uint64_t timestamp_ns = 0;
  bool want_ack = false;
};

struct ReadResult {
  std::vector<uint8_t> payload;
  std::string source;
  uint64_t message_id = 0;
  uint64_t timestamp_ns = 0;
};

struct CounterSnapshot {
  uint64_t enqueued = 0;
  uint64_t sent = 0;
  uint64_t received = 0;
  uint64_t dropped = 0;
  uint64_t acks = 0;
  uint64_t duplicate_acks = 0;
  uint64_t queued = 0;
};

struct ChannelInfo {
  std::string peer;
  std::string carrier;
  std::string direction;  // "output" | "input"
  qos::SchedulingProperties sched;
  qos::PriorityClass priority = qos::PriorityClass::Normal;
  std::string qos_degraded;  // packet-marking refusal, if any
  CounterSnapshot counters;
  size_t qlen = kDefaultQueueCapacity;
  std::string status = "active";  // active | degraded | closed
};

// Everything both channel directions share: identity, counters, the QoS
// pair (thread scheduling + packet marking), and the worker thread.
class ChannelBase {
 public:
  ChannelBase(std::string local_port, std::string peer, std::string carrier,
              qos::SchedApplier* applier);
  virtual ~ChannelBase() = default;

  const std::string& peer() const { return peer_; }
  const std::string& carrier() const { return carrier_; }

  void request_stop();
  void join();
  bool stopped() const { return stop_.load(); }

  // Throws Error{invalid_priority}; OS refusal degrades instead of failing.
  // Returns the degradation reason ("" when fully applied).
  std::string set_sched(qos::SchedPolicy policy, int priority);
  qos::SchedulingProperties sched() const;

  // Returns the degradation reason ("" when fully applied).
  virtual std::string set_packet_priority(qos::PriorityClass c);
  qos::PriorityClass packet_priority() const {
    return static_cast<qos::PriorityClass>(priority_class_.load());
  }
  uint8_t current_tos() const { return tos_.load(); }

  CounterSnapshot counters() const;
  std::string status() const;

 protected:
  virtual void on_stop_requested() {}
  virtual size_t queued_now() const { return 0; }
  void start_thread(std::function<void()> body);

  const std::string local_port_;
  const std::string peer_;
  const std::string carrier_;
  qos::SchedApplier* applier_;

  std::thread thread_;
  std::atomic<bool> stop_{false};
  std::atomic<bool> running_{false};

  struct Counters {
    std::atomic<uint64_t> enqueued{0};
    std::atomic<uint64_t> sent{0};
    std::atomic<uint64_t> received{0};
    std::atomic<uint64_t> dropped{0};
    std::atomic<uint64_t> acks{0};
    std::atomic<uint64_t> duplicate_acks{0};
  };
  Counters counters_;

  mutable std::mutex qos_mu_;  // guards sched_ and qos_degraded_
  qos::SchedulingProperties sched_;
  std::string qos_degraded_;
  std::atomic<int> priority_class_{static_cast<int>(qos::PriorityClass::Normal)};
  std::atomic<uint8_t> tos_{0};
  std::atomic<int> weight_{0};  // emu drain-order weight from sched
};

// Sender side: drains its bounded queue into the carrier. Exactly one
// dedicated thread.
class OutputChannel : public ChannelBase {
 public:
  struct Init {
    std::string local_port;
    std::string peer;
    std::string carrier;
    size_t qlen = kDefaultQueueCapacity;
    qos::SchedApplier* applier = nullptr;
    // tcp: the data connection. udp/emu: the control connection.
    net::Fd conn;
    // udp
    net::Fd udp_sock;
    std::string udp_peer_host;
    uint16_t udp_peer_port = 0;
    // emu
    std::shared_ptr<emu::World> world;
    uint64_t flow = 0;
  };

  // (message_id, send_ns, ack_ns) for every first acknowledgment.
  using AckObserver = std::function<void(uint64_t, uint64_t, uint64_t)>;

  explicit OutputChannel(Init init);
  ~OutputChannel() override;

  void start();

  // Never blocks; drop-oldest on overflow with counter bookkeeping.
  void enqueue(OutMessage m);

  void set_ack_observer(AckObserver observer);

  // Also marks the carrying socket for real carriers.
  std::string set_packet_priority(qos::PriorityClass c) override;

  size_t qlen() const { return queue_.capacity(); }
  size_t set_qlen(size_t capacity);
  size_t queue_size() const { return queue_.size(); }

  // True once enqueued == sent + dropped (nothing pending). Polls; -1 waits
  // indefinitely.
  bool flush(int timeout_ms);

  ChannelInfo info() const;

 private:
  void run_tcp();
  void run_udp();
  void run_emu();
  void drain_remaining_as_dropped();
  void handle_ack_frame(uint64_t message_id);
  void on_ack(uint64_t message_id, uint64_t end_ns);
  bool transmit_tcp(const OutMessage& m);
  bool transmit_udp(const OutMessage& m);
  bool transmit_emu(const OutMessage& m);
  void note_pending(const OutMessage& m);

  void on_stop_requested() override;
  size_t queued_now() const override { return queue_.size(); }

  net::Fd conn_;
  net::Fd udp_sock_;
  std::string udp_peer_host_;
  uint16_t udp_peer_port_ = 0;
  std::shared_ptr<emu::World> world_;
  uint64_t flow_ = 0;
  std::shared_ptr<const std::atomic<bool>> stall_flag_;

  BoundedQueue<OutMessage> queue_;
  net::Fd queue_event_;

  std::mutex ack_mu_;  // guards pending_ and observer_; leaf lock
  std::map<uint64_t, uint64_t> pending_;  // message_id -> send timestamp
  AckObserver observer_;
};

// Receiver side: decodes carrier input, feeds the port's read queue,
// acknowledges when asked. Exactly one dedicated thread.
class InputChannel : public ChannelBase {
 public:
  struct Init {
    std::string local_port;
    std::string peer;
    std::string carrier;
    size_t qlen = kDefaultQueueCapacity;
    qos::SchedApplier* applier = nullptr;
    // tcp: the data connection. udp/emu: the control connection.
    net::Fd conn;
    // udp
    net::Fd udp_sock;
    std::string udp_peer_host;
    uint16_t udp_peer_port = 0;
    // emu
    std::shared_ptr<emu::World> world;
    uint64_t flow = 0;
  };

  explicit InputChannel(Init init);
  ~InputChannel() override;

  void start();

  // Invoked (from the channel thread or the emulator event loop) after a
  // message lands in the read queue; keep it leaf-level cheap.
  void set_delivery_callback(std::function<void()> callback);

  std::optional<ReadResult> try_read() { return read_queue_.try_pop(); }
  size_t pending_reads() const { return read_queue_.size(); }

  // Marks outgoing acknowledgments on real carriers (emu acknowledgments
  // inherit the acknowledged frame's TOS instead).
  std::string set_packet_priority(qos::PriorityClass c) override;

  size_t qlen() const { return read_queue_.capacity(); }
  size_t set_qlen(size_t capacity);

  ChannelInfo info() const;

 private:
  void run_tcp();
  void run_udp();
  void run_emu();
  // Counts, queues, notifies. Returns true when the sender asked for an
  // acknowledgment (carrier loops answer over their own transport).
  bool handle_data_frame(wire::Frame f);
  void deliver(ReadResult r);

  void on_stop_requested() override;
  size_t queued_now() const override { return read_queue_.size(); }

  net::Fd conn_;
  net::Fd udp_sock_;
  std::string udp_peer_host_;
  uint16_t udp_peer_port_ = 0;
  std::shared_ptr<emu::World> world_;
  uint64_t flow_ = 0;

  struct EmuInbox {
    std::shared_ptr<const std::vector<uint8_t>> frame;
    uint8_t tos = 0;
    uint32_t ack_size = 0;
  };
  // Unbounded on purpose: the receiver thread drains promptly and overflow
  // accounting belongs to the bounded read queue.
  std::mutex inbox_mu_;
  std::condition_variable inbox_cv_;
  std::vector<EmuInbox> inbox_;

  BoundedQueue<ReadResult> read_queue_;
  std::mutex callback_mu_;
  std::function<void()> delivery_callback_;
};

}  // namespace prioport::port
