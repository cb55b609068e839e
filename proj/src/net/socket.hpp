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
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace prioport::net {

// Move-only owner of a file descriptor.
class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() { reset(); }

  Fd(Fd&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
  Fd& operator=(Fd&& other) noexcept;
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;

  int get() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release();
  void reset();

 private:
  int fd_ = -1;
};

// TCP. Throws Error{bind_failure} / Error{server_unreachable} / Error{io_error}.
Fd tcp_listen(const std::string& host, uint16_t port, int backlog = 64);
Fd tcp_connect(const std::string& host, uint16_t port);
// nullopt when the listener was shut down.
std::optional<Fd> tcp_accept(const Fd& listener);
uint16_t local_port(const Fd& fd);

// UDP, bound to an ephemeral local port.
Fd udp_bind(const std::string& host);
void udp_send(const Fd& fd, const std::string& host, uint16_t port,
              std::span<const uint8_t> datagram);
// Size of the datagram, or nullopt on timeout. buffer must be pre-sized.
std::optional<size_t> udp_recv(const Fd& fd, std::vector<uint8_t>* buffer,
                               int timeout_ms);

// Full-buffer stream IO. send_all throws Error{io_error} on a broken peer;
// recv_exact returns false on clean EOF before any byte, throws on errors
// mid-buffer.
void send_all(const Fd& fd, std::span<const uint8_t> data);
bool recv_exact(const Fd& fd, uint8_t* out, size_t len);

// Sets the IP type-of-service byte. Empty string on success, otherwise a
// short reason; callers record it as a degraded state, never fail on it.
std::string set_socket_tos(const Fd& fd, uint8_t tos);

// Wake-up channel for poll loops (eventfd).
Fd make_event_fd();
void event_signal(const Fd& fd);
void event_drain(const Fd& fd);

// Waits for readability of up to two descriptors. Bit 0 of the result: a is
// readable; bit 1: b is readable. Zero on timeout. timeout_ms < 0 blocks.
int poll_readable2(const Fd& a, const Fd& b, int timeout_ms);
bool poll_readable(const Fd& a, int timeout_ms);
// Bitmask of readable descriptors; invalid entries never set their bit.
int poll_many(std::initializer_list<const Fd*> fds, int timeout_ms);

// True when the peer performed an orderly shutdown (non-destructive probe).
bool peer_closed(const Fd& fd);
// Remote address of a connected socket ("127.0.0.1").
std::string peer_host(const Fd& fd);

void shutdown_both(const Fd& fd);

}  // namespace prioport::net
