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

#include "port/port.hpp"

#include <sys/socket.h>

#include <charconv>
#include <utility>

#include "common/clock.hpp"
#include "common/error.hpp"
#include "name_server/registry.hpp"
#include "qos/admin.hpp"
#include "wire/frame_io.hpp"

namespace prioport::port {

namespace {

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> words;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\t') ++i;
    if (i > start) words.push_back(text.substr(start, i - start));
  }
  return words;
}

uint16_t parse_handshake_port(const std::string& value) {
  uint16_t port = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), port);
  if (ec != std::errc{} || ptr != value.data() + value.size() || port == 0) {
    raise(Errc::handshake_failure, "bad datagram port in handshake: " + value);
  }
  return port;
}

uint64_t parse_handshake_flow(const std::string& value) {
  uint64_t flow = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), flow);
  if (ec != std::errc{} || ptr != value.data() + value.size() || flow == 0) {
    raise(Errc::handshake_failure, "bad flow id in handshake: " + value);
  }
  return flow;
}

// Erases the session's descriptor from the tracking set before the Fd can
// close (and recycle) it.
struct SessionTracker {
  std::mutex* mu;
  std::unordered_set<int>* fds;
  int fd;
  ~SessionTracker() {
    std::lock_guard lock(*mu);
    fds->erase(fd);
  }
};

}  // namespace

Port::Port(std::string name, PortConfig config)
    : name_(std::move(name)),
      listen_host_(std::move(config.listen_host)),
      emu_host_(config.emu_host.empty() ? name_ : std::move(config.emu_host)),
      world_(config.world ? std::move(config.world)
                          : emu::World::default_world()),
      applier_(config.sched_applier != nullptr ? config.sched_applier
                                               : &qos::system_sched_applier()),
      default_qlen_(config.default_qlen),
      advertise_carrier_(std::move(config.advertise_carrier)),
      ns_client_(ns::NameClient::from_env(config.nameserver)) {
  ns::validate_port_name(name_);
  listener_ = net::tcp_listen(listen_host_, config.listen_port);
  listen_port_ = net::local_port(listener_);
  try {
    ns_client_.register_name(
        name_, ns::EndpointTriplet{listen_host_, listen_port_, advertise_carrier_});
  } catch (const Error& e) {
    listener_.reset();
    if (e.code() == Errc::server_unreachable) {
      raise(Errc::bind_failure,
            std::string("name server unreachable: ") + e.what());
    }
    throw;
  }
  acceptor_ = std::thread([this] { accept_loop(); });
}

Port::~Port() { close(); }

uint64_t Port::publish(std::span<const uint8_t> payload,
                       const PublishOptions& opts) {
  if (closing_.load()) raise(Errc::port_closed, "publish on closed port " + name_);
  const uint64_t id = next_message_id_.fetch_add(1);
  wire::Frame f;
  f.type = wire::FrameType::Data;
  f.flags = opts.want_ack ? wire::kFlagAckRequested : 0;
  f.message_id = id;
  f.timestamp_ns = opts.timestamp_ns != 0 ? opts.timestamp_ns : mono_ns();
  f.payload.assign(payload.begin(), payload.end());
  auto bytes =
      std::make_shared<const std::vector<uint8_t>>(wire::encode_frame(f));

  std::vector<std::shared_ptr<OutputChannel>> targets;
  {
    std::lock_guard lock(chan_mu_);
    targets.reserve(outputs_.size());
    for (auto& [peer, channel] : outputs_) {
      if (!channel->stopped()) targets.push_back(channel);
    }
  }
  OutMessage m;
  m.frame_bytes = bytes;
  m.message_id = id;
  m.timestamp_ns = f.timestamp_ns;
  m.want_ack = opts.want_ack;
  for (auto& channel : targets) channel->enqueue(m);
  return id;
}

std::optional<ReadResult> Port::try_read_once() {
  std::lock_guard lock(chan_mu_);
  if (inputs_.empty()) return std::nullopt;
  std::vector<InputChannel*> order;
  order.reserve(inputs_.size());
  for (auto& [peer, channel] : inputs_) order.push_back(channel.get());
  const size_t n = order.size();
  for (size_t i = 0; i < n; ++i) {
    InputChannel* channel = order[(rr_cursor_ + i) % n];
    if (auto r = channel->try_read()) {
      rr_cursor_ = (rr_cursor_ + i + 1) % n;
      return r;
    }
  }
  return std::nullopt;
}

std::optional<ReadResult> Port::read(int timeout_ms) {
  if (closing_.load()) raise(Errc::port_closed, "read on closed port " + name_);
  if (auto r = try_read_once()) return r;
  if (timeout_ms == 0) return std::nullopt;

  std::optional<ReadResult> got;
  auto ready = [&] {
    if (closing_.load()) return true;
    got = try_read_once();
    return got.has_value();
  };
  std::unique_lock lock(read_mu_);
  if (timeout_ms < 0) {
    read_cv_.wait(lock, ready);
  } else if (!read_cv_.wait_for(lock, std::chrono::milliseconds(timeout_ms),
                                ready)) {
    raise(Errc::timeout, "no message within timeout on " + name_);
  }
  if (got) return got;
  raise(Errc::port_closed, "port closed while reading " + name_);
}

void Port::connect(const std::string& dst, const std::string& carrier) {
  if (closing_.load()) raise(Errc::port_closed, "connect on closed port");
  const ns::EndpointTriplet endpoint = ns_client_.lookup(dst);
  connect_to_endpoint(dst, endpoint.host, endpoint.port, carrier);
}

void Port::connect_to_endpoint(const std::string& dst, const std::string& host,
                               uint16_t port, const std::string& carrier) {
  if (closing_.load()) raise(Errc::port_closed, "connect on closed port");
  if (!wire::is_known_carrier(carrier)) {
    raise(Errc::carrier_unsupported, "unknown carrier '" + carrier + "'");
  }
  if (find_output(dst, /*active_only=*/true)) {
    raise(Errc::io_error, "already connected to " + dst);
  }

  net::Fd conn;
  try {
    conn = net::tcp_connect(host, port);
  } catch (const Error& e) {
    raise(Errc::handshake_failure, "cannot reach " + dst + " at " + host + ":" +
                                       std::to_string(port) + ": " + e.what());
  }

  OutputChannel::Init init;
  init.local_port = name_;
  init.peer = dst;
  init.carrier = carrier;
  init.qlen = default_qlen_;
  init.applier = applier_;

  wire::HandshakeInfo info;
  info.role = wire::SessionRole::Data;
  info.source_port = name_;
  info.carrier = carrier;
  if (carrier == wire::kCarrierUdp) {
    init.udp_sock = net::udp_bind(listen_host_);
    info.extra["udp_port"] = std::to_string(net::local_port(init.udp_sock));
  } else if (wire::is_emu_carrier(carrier)) {
    info.extra["world"] = world_->token();
    info.extra["emu_host"] = emu_host_;
  }

  auto reply = wire::handshake_initiate(conn, info);
  if (carrier == wire::kCarrierUdp) {
    auto it = reply.find("udp_port");
    if (it == reply.end()) {
      raise(Errc::handshake_failure, "peer sent no datagram port");
    }
    init.udp_peer_host = net::peer_host(conn);
    init.udp_peer_port = parse_handshake_port(it->second);
  } else if (wire::is_emu_carrier(carrier)) {
    auto it = reply.find("flow");
    if (it == reply.end()) {
      raise(Errc::handshake_failure, "peer sent no flow id");
    }
    init.world = world_;
    init.flow = parse_handshake_flow(it->second);
  }
  init.conn = std::move(conn);

  auto channel = std::make_shared<OutputChannel>(std::move(init));
  channel->start();
  std::lock_guard lock(chan_mu_);
  outputs_[dst] = std::move(channel);
}

void Port::disconnect(const std::string& dst) {
  if (closing_.load()) raise(Errc::port_closed, "disconnect on closed port");
  auto channel = find_output(dst, /*active_only=*/true);
  if (!channel) raise(Errc::no_such_channel, "no active channel to " + dst);
  channel->request_stop();
  channel->join();
  // The stopped channel stays in the map: its final counters remain
  // readable until the port closes.
}

ChannelInfo Port::channel_info(const std::string& peer) const {
  std::lock_guard lock(chan_mu_);
  auto o = outputs_.find(peer);
  auto i = inputs_.find(peer);
  if (o != outputs_.end() && !o->second->stopped()) return o->second->info();
  if (i != inputs_.end() && !i->second->stopped()) return i->second->info();
  if (o != outputs_.end()) return o->second->info();
  if (i != inputs_.end()) return i->second->info();
  raise(Errc::no_such_channel, "no channel to " + peer);
}

std::vector<ChannelInfo> Port::channels() const {
  std::lock_guard lock(chan_mu_);
  std::vector<ChannelInfo> all;
  all.reserve(outputs_.size() + inputs_.size());
  for (const auto& [peer, channel] : outputs_) all.push_back(channel->info());
  for (const auto& [peer, channel] : inputs_) all.push_back(channel->info());
  return all;
}

std::string Port::set_channel_sched(const std::string& peer,
                                    qos::SchedPolicy policy, int priority) {
  if (auto o = find_output(peer, /*active_only=*/true)) {
    return o->set_sched(policy, priority);
  }
  if (auto i = find_input(peer, /*active_only=*/true)) {
    return i->set_sched(policy, priority);
  }
  raise(Errc::no_such_channel, "no active channel to " + peer);
}

std::string Port::set_channel_priority(const std::string& peer,
                                       qos::PriorityClass c) {
  if (auto o = find_output(peer, /*active_only=*/true)) {
    return o->set_packet_priority(c);
  }
  if (auto i = find_input(peer, /*active_only=*/true)) {
    return i->set_packet_priority(c);
  }
  raise(Errc::no_such_channel, "no active channel to " + peer);
}

void Port::set_channel_qlen(const std::string& peer, size_t qlen) {
  if (auto o = find_output(peer, /*active_only=*/true)) {
    o->set_qlen(qlen);
    return;
  }
  if (auto i = find_input(peer, /*active_only=*/true)) {
    i->set_qlen(qlen);
    return;
  }
  raise(Errc::no_such_channel, "no active channel to " + peer);
}

void Port::set_ack_observer(const std::string& peer,
                            OutputChannel::AckObserver observer) {
  auto channel = find_output(peer, /*active_only=*/false);
  if (!channel) raise(Errc::no_such_channel, "no output channel to " + peer);
  channel->set_ack_observer(std::move(observer));
}

bool Port::flush(const std::string& peer, int timeout_ms) {
  auto channel = find_output(peer, /*active_only=*/false);
  if (!channel) raise(Errc::no_such_channel, "no output channel to " + peer);
  return channel->flush(timeout_ms);
}

bool Port::flush_all(int timeout_ms) {
  std::vector<std::shared_ptr<OutputChannel>> targets;
  {
    std::lock_guard lock(chan_mu_);
    for (auto& [peer, channel] : outputs_) targets.push_back(channel);
  }
  bool all = true;
  for (auto& channel : targets) all = channel->flush(timeout_ms) && all;
  return all;
}

std::string Port::handle_admin_text(const std::string& text) {
  const auto words = split_words(text);
  if (!words.empty() && words[0] == "connect" &&
      (words.size() == 2 || words.size() == 3)) {
    try {
      connect(words[1], words.size() == 3 ? words[2] : wire::kCarrierTcp);
      return "ok";
    } catch (const Error& e) {
      return qos::render_err_reply(e.code());
    }
  }
  if (!words.empty() && words[0] == "disconnect" && words.size() == 2) {
    try {
      disconnect(words[1]);
      return "ok";
    } catch (const Error& e) {
      return qos::render_err_reply(e.code());
    }
  }

  try {
    const qos::AdminRequest req = qos::parse_admin_command(text);
    if (req.verb == qos::AdminVerb::PropSet) {
      const std::string& key = req.property.items[0].text;
      if (key == "sched") {
        const qos::ParsedSched s = qos::sched_from_property(req.property);
        return qos::render_set_reply(
            set_channel_sched(req.target_peer, s.policy, s.priority));
      }
      if (key == "qos") {
        return qos::render_set_reply(set_channel_priority(
            req.target_peer, qos::qos_from_property(req.property)));
      }
      set_channel_qlen(req.target_peer, qos::qlen_from_property(req.property));
      return qos::render_set_reply("");
    }
    const ChannelInfo info = channel_info(req.target_peer);
    qos::ChannelReport report;
    report.sched = info.sched;
    report.packet_priority = info.priority;
    report.enqueued = info.counters.enqueued;
    report.sent = info.counters.sent;
    report.received = info.counters.received;
    report.dropped = info.counters.dropped;
    report.acks = info.counters.acks;
    report.queued = info.counters.queued;
    report.status = info.status;
    return qos::render_get_reply(report);
  } catch (const Error& e) {
    return qos::render_err_reply(e.code());
  }
}

void Port::wake_readers() {
  { std::lock_guard lock(read_mu_); }
  read_cv_.notify_all();
}

void Port::close() {
  if (closing_.exchange(true)) return;
  wake_readers();
  try {
    ns_client_.unregister(name_);
  } catch (...) {
    // Best effort: a dead name server must not block teardown.
  }
  ns_client_.close();

  if (listener_.valid()) net::shutdown_both(listener_);
  if (acceptor_.joinable()) acceptor_.join();

  {
    std::lock_guard lock(workers_mu_);
    for (int fd : session_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(workers_mu_);
    workers.swap(workers_);
  }
  for (auto& t : workers) {
    if (t.joinable()) t.join();
  }

  std::map<std::string, std::shared_ptr<OutputChannel>> outputs;
  std::map<std::string, std::shared_ptr<InputChannel>> inputs;
  {
    std::lock_guard lock(chan_mu_);
    outputs.swap(outputs_);
    inputs.swap(inputs_);
  }
  for (auto& [peer, channel] : outputs) channel->request_stop();
  for (auto& [peer, channel] : inputs) channel->request_stop();
  for (auto& [peer, channel] : outputs) channel->join();
  for (auto& [peer, channel] : inputs) channel->join();
  wake_readers();
}

void Port::accept_loop() {
  for (;;) {
    auto conn = net::tcp_accept(listener_);
    if (!conn || closing_.load()) break;
    const int raw = conn->get();
    std::lock_guard lock(workers_mu_);
    session_fds_.insert(raw);
    workers_.emplace_back(&Port::handle_session, this, std::move(*conn));
  }
}

void Port::handle_session(net::Fd conn) {
  SessionTracker tracker{&workers_mu_, &session_fds_, conn.get()};
  wire::HandshakeInfo hs;
  try {
    hs = wire::handshake_read(conn);
  } catch (const Error&) {
    return;
  }
  if (hs.protocol_version != wire::kProtocolVersion) {
    try {
      wire::handshake_reply(conn, errc_token(Errc::version_mismatch));
    } catch (const Error&) {
    }
    return;
  }
  if (hs.role == wire::SessionRole::Admin) {
    try {
      wire::handshake_reply(conn, "");
    } catch (const Error&) {
      return;
    }
    run_admin_session(conn);
    return;
  }
  accept_data_session(std::move(conn), hs);
}

void Port::run_admin_session(const net::Fd& conn) {
  for (;;) {
    if (closing_.load()) break;
    std::optional<wire::Frame> f;
    try {
      f = wire::recv_frame(conn);
    } catch (const Error&) {
      break;
    }
    if (!f) break;
    if (f->type != wire::FrameType::AdminRequest) continue;
    const std::string text(f->payload.begin(), f->payload.end());
    const std::string reply = handle_admin_text(text);
    wire::Frame r;
    r.type = wire::FrameType::AdminReply;
    r.message_id = f->message_id;
    r.timestamp_ns = f->timestamp_ns;
    r.payload.assign(reply.begin(), reply.end());
    try {
      wire::send_frame(conn, r);
    } catch (const Error&) {
      break;
    }
  }
}

void Port::accept_data_session(net::Fd conn, const wire::HandshakeInfo& hs) {
  auto refuse = [&](const std::string& token) {
    try {
      wire::handshake_reply(conn, token);
    } catch (const Error&) {
    }
  };
  if (hs.source_port.empty()) {
    refuse(errc_token(Errc::handshake_failure));
    return;
  }
  if (!wire::is_known_carrier(hs.carrier)) {
    refuse(errc_token(Errc::carrier_unsupported));
    return;
  }
  if (closing_.load()) {
    refuse(errc_token(Errc::handshake_failure));
    return;
  }

  InputChannel::Init init;
  init.local_port = name_;
  init.peer = hs.source_port;
  init.carrier = hs.carrier;
  init.qlen = default_qlen_;
  init.applier = applier_;

  std::map<std::string, std::string> reply_keys;
  uint64_t opened_flow = 0;
  try {
    if (hs.carrier == wire::kCarrierUdp) {
      auto it = hs.extra.find("udp_port");
      if (it == hs.extra.end()) {
        raise(Errc::handshake_failure, "initiator sent no datagram port");
      }
      init.udp_sock = net::udp_bind(listen_host_);
      init.udp_peer_host = net::peer_host(conn);
      init.udp_peer_port = parse_handshake_port(it->second);
      reply_keys["udp_port"] = std::to_string(net::local_port(init.udp_sock));
    } else if (wire::is_emu_carrier(hs.carrier)) {
      auto world_it = hs.extra.find("world");
      auto host_it = hs.extra.find("emu_host");
      if (world_it == hs.extra.end() || host_it == hs.extra.end()) {
        raise(Errc::handshake_failure, "initiator sent no emu identity");
      }
      // A token mismatch means the initiator lives in another process and
      // cannot share this virtual network.
      if (world_it->second != world_->token()) {
        raise(Errc::handshake_failure, "emu world mismatch");
      }
      init.world = world_;
      init.flow = world_->open_flow(host_it->second, emu_host_,
                                    wire::emu_profile(hs.carrier));
      opened_flow = init.flow;
      reply_keys["flow"] = std::to_string(init.flow);
      reply_keys["emu_host"] = emu_host_;
    }
  } catch (const Error& e) {
    refuse(errc_token(e.code()));
    return;
  }

  try {
    wire::handshake_reply(conn, "", reply_keys);
  } catch (const Error&) {
    if (opened_flow != 0) world_->close_flow(opened_flow);
    return;
  }
  init.conn = std::move(conn);

  auto channel = std::make_shared<InputChannel>(std::move(init));
  channel->set_delivery_callback([this] { wake_readers(); });
  channel->start();

  std::shared_ptr<InputChannel> stale;
  {
    std::lock_guard lock(chan_mu_);
    auto it = inputs_.find(hs.source_port);
    if (it != inputs_.end()) stale = it->second;
    inputs_[hs.source_port] = channel;
  }
  if (stale) {
    stale->request_stop();
    stale->join();
  }
}

std::shared_ptr<OutputChannel> Port::find_output(const std::string& peer,
                                                 bool active_only) const {
  std::lock_guard lock(chan_mu_);
  auto it = outputs_.find(peer);
  if (it == outputs_.end()) return nullptr;
  if (active_only && it->second->stopped()) return nullptr;
  return it->second;
}

std::shared_ptr<InputChannel> Port::find_input(const std::string& peer,
                                               bool active_only) const {
  std::lock_guard lock(chan_mu_);
  auto it = inputs_.find(peer);
  if (it == inputs_.end()) return nullptr;
  if (active_only && it->second->stopped()) return nullptr;
  return it->second;
}

}  // namespace prioport::port
