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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "emu/world.hpp"
#include "name_server/client.hpp"
#include "net/socket.hpp"
#include "port/channel.hpp"
#include "qos/sched.hpp"
#include "wire/handshake.hpp"
#include "wire/profile.hpp"

namespace prioport::port {

struct PortConfig {
  // "host:port". Empty falls back to PRIOPORT_NAMESERVER, then the default.
  std::string nameserver;
  std::string listen_host = "127.0.0.1";
  uint16_t listen_port = 0;  // 0 picks an ephemeral port
  size_t default_qlen = kDefaultQueueCapacity;
  // Virtual network for emu channels; null uses the process-wide world.
  std::shared_ptr<emu::World> world;
  // Virtual host name inside the world; empty reuses the port name.
  std::string emu_host;
  // Applied to channel threads; null uses the real OS applier. Tests inject
  // a refusing one to drive the degraded path without dropping privileges.
  qos::SchedApplier* sched_applier = nullptr;
  // Carrier token stored in the name-server record.
  std::string advertise_carrier = wire::kCarrierTcp;
};

// A named endpoint holding any number of input and output channels, each
// with its own dedicated thread, bounded queue and QoS state. Registered
// with the name server on open, unregistered on close. All methods are
// usable from multiple threads concurrently.
class Port {
 public:
  // Throws Error{malformed_name} / Error{name_already_registered} /
  // Error{bind_failure}. An unreachable name server reports bind_failure and
  // leaves nothing half-open.
  explicit Port(std::string name, PortConfig config = {});
  ~Port();

  Port(const Port&) = delete;
  Port& operator=(const Port&) = delete;

  const std::string& name() const { return name_; }
  const std::string& listen_host() const { return listen_host_; }
  uint16_t listen_port() const { return listen_port_; }
  const std::string& emu_host() const { return emu_host_; }
  const std::shared_ptr<emu::World>& world() const { return world_; }

  // Encodes once, enqueues onto every active output channel without waiting
  // for any network transmission, and returns the message id (ids start at 1
  // and are unique per port). Throws Error{port_closed}.
  uint64_t publish(std::span<const uint8_t> payload,
                   const PublishOptions& opts = {});

  // Next message across input channels, round-robin, per-channel FIFO.
  // timeout_ms == 0 polls (nullopt when empty); timeout_ms > 0 waits and
  // throws Error{timeout} when nothing arrives; timeout_ms < 0 waits
  // indefinitely. Throws Error{port_closed} once the port closes.
  std::optional<ReadResult> read(int timeout_ms);

  // Resolves dst via the name server, then handshakes directly with the
  // peer. Throws Error{not_found} (unknown name), Error{server_unreachable},
  // Error{carrier_unsupported}, Error{handshake_failure}.
  void connect(const std::string& dst,
               const std::string& carrier = wire::kCarrierTcp);
  // Same, with the endpoint already known; performs no name-server traffic.
  void connect_to_endpoint(const std::string& dst, const std::string& host,
                           uint16_t port, const std::string& carrier);
  // Stops the output channel to dst; its final counters stay readable until
  // the port closes. Throws Error{no_such_channel} when absent or already
  // disconnected.
  void disconnect(const std::string& dst);

  // Output channel first, then input; includes closed channels (final
  // counters). Throws Error{no_such_channel}.
  ChannelInfo channel_info(const std::string& peer) const;
  std::vector<ChannelInfo> channels() const;

  // Setters target the active output channel to peer, falling back to the
  // active input channel. Each returns the degradation reason ("" when fully
  // applied) and throws Error{no_such_channel} / Error{invalid_priority}.
  std::string set_channel_sched(const std::string& peer,
                                qos::SchedPolicy policy, int priority);
  std::string set_channel_priority(const std::string& peer,
                                   qos::PriorityClass c);
  void set_channel_qlen(const std::string& peer, size_t qlen);

  void set_ack_observer(const std::string& peer,
                        OutputChannel::AckObserver observer);

  // True once the output channel to peer has nothing pending.
  bool flush(const std::string& peer, int timeout_ms);
  bool flush_all(int timeout_ms);

  // One admin command in, one reply out ("ok", "ok (degraded ...)",
  // "err <reason>" or a property listing). Also accepts the session verbs
  // "connect <dst> [carrier]" and "disconnect <dst>" so connections can be
  // managed at runtime through the same sessions.
  std::string handle_admin_text(const std::string& text);

  // Idempotent: unregisters, stops the listener, admin sessions and every
  // channel. Counters become unreachable afterwards.
  void close();
  bool closed() const { return closing_.load(); }

 private:
  void accept_loop();
  void handle_session(net::Fd conn);
  void run_admin_session(const net::Fd& conn);
  void accept_data_session(net::Fd conn, const wire::HandshakeInfo& hs);
  std::optional<ReadResult> try_read_once();
  void wake_readers();

  std::shared_ptr<OutputChannel> find_output(const std::string& peer,
                                             bool active_only) const;
  std::shared_ptr<InputChannel> find_input(const std::string& peer,
                                           bool active_only) const;

  std::string name_;
  std::string listen_host_;
  uint16_t listen_port_ = 0;
  std::string emu_host_;
  std::shared_ptr<emu::World> world_;
  qos::SchedApplier* applier_;
  size_t default_qlen_;
  std::string advertise_carrier_;

  ns::NameClient ns_client_;
  net::Fd listener_;
  std::thread acceptor_;
  std::atomic<bool> closing_{false};

  std::mutex workers_mu_;
  std::vector<std::thread> workers_;
  std::unordered_set<int> session_fds_;

  mutable std::mutex chan_mu_;
  std::map<std::string, std::shared_ptr<OutputChannel>> outputs_;
  std::map<std::string, std::shared_ptr<InputChannel>> inputs_;
  size_t rr_cursor_ = 0;

  // Leaf lock for blocked readers; delivery callbacks take it briefly and
  // notify. Never acquired while holding chan_mu_.
  std::mutex read_mu_;
  std::condition_variable read_cv_;

  std::atomic<uint64_t> next_message_id_{1};
};

}  // namespace prioport::port
