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

#include "net/socket.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/ip.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/eventfd.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "common/error.hpp"

namespace prioport::net {

namespace {

std::string errno_text() { return std::strerror(errno); }

struct AddrInfo {
  addrinfo* list = nullptr;
  ~AddrInfo() {
    if (list != nullptr) freeaddrinfo(list);
  }
};

AddrInfo resolve(const std::string& host, uint16_t port, int socktype,
                 bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = socktype;
  if (passive) hints.ai_flags = AI_PASSIVE;
  AddrInfo out;
  const std::string service = std::to_string(port);
  const int rc = getaddrinfo(host.empty() ? nullptr : host.c_str(),
                             service.c_str(), &hints, &out.list);
  if (rc != 0) {
    raise(Errc::unknown_host,
          "cannot resolve '" + host + "': " + gai_strerror(rc));
  }
  return out;
}

}  // namespace

Fd& Fd::operator=(Fd&& other) noexcept {
  if (this != &other) {
    reset();
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

int Fd::release() {
  const int fd = fd_;
  fd_ = -1;
  return fd;
}

void Fd::reset() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

Fd tcp_listen(const std::string& host, uint16_t port, int backlog) {
  AddrInfo ai = resolve(host, port, SOCK_STREAM, true);
  Fd fd(::socket(AF_INET, SOCK_STREAM, 0));
  if (!fd.valid()) raise(Errc::bind_failure, "socket: " + errno_text());
  const int one = 1;
  setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(fd.get(), ai.list->ai_addr, ai.list->ai_addrlen) != 0) {
    raise(Errc::bind_failure, "bind " + host + ":" + std::to_string(port) +
                                  ": " + errno_text());
  }
  if (::listen(fd.get(), backlog) != 0) {
    raise(Errc::bind_failure, "listen: " + errno_text());
  }
  return fd;
}

Fd tcp_connect(const std::string& host, uint16_t port) {
  AddrInfo ai = resolve(host, port, SOCK_STREAM, false);
  Fd fd(::socket(AF_INET, SOCK_STREAM, 0));
  if (!fd.valid()) raise(Errc::io_error, "socket: " + errno_text());
  if (::connect(fd.get(), ai.list->ai_addr, ai.list->ai_addrlen) != 0) {
    raise(Errc::server_unreachable, "connect " + host + ":" +
                                        std::to_string(port) + ": " +
                                        errno_text());
  }
  const int one = 1;
  setsockopt(fd.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return fd;
}

std::optional<Fd> tcp_accept(const Fd& listener) {
  const int fd = ::accept(listener.get(), nullptr, nullptr);
  if (fd < 0) return std::nullopt;
  const int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return Fd(fd);
}

uint16_t local_port(const Fd& fd) {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (getsockname(fd.get(), reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    raise(Errc::io_error, "getsockname: " + errno_text());
  }
  return ntohs(addr.sin_port);
}

Fd udp_bind(const std::string& host) {
  AddrInfo ai = resolve(host, 0, SOCK_DGRAM, true);
  Fd fd(::socket(AF_INET, SOCK_DGRAM, 0));
  if (!fd.valid()) raise(Errc::bind_failure, "socket: " + errno_text());
  if (::bind(fd.get(), ai.list->ai_addr, ai.list->ai_addrlen) != 0) {
    raise(Errc::bind_failure, "udp bind: " + errno_text());
  }
  return fd;
}

void udp_send(const Fd& fd, const std::string& host, uint16_t port,
              std::span<const uint8_t> datagram) {
  AddrInfo ai = resolve(host, port, SOCK_DGRAM, false);
  const ssize_t n = ::sendto(fd.get(), datagram.data(), datagram.size(), 0,
                             ai.list->ai_addr, ai.list->ai_addrlen);
  if (n < 0 || static_cast<size_t>(n) != datagram.size()) {
    raise(Errc::io_error, "sendto: " + errno_text());
  }
}

std::optional<size_t> udp_recv(const Fd& fd, std::vector<uint8_t>* buffer,
                               int timeout_ms) {
  if (!poll_readable(fd, timeout_ms)) return std::nullopt;
  const ssize_t n = ::recv(fd.get(), buffer->data(), buffer->size(), 0);
  if (n < 0) raise(Errc::io_error, "recv: " + errno_text());
  return static_cast<size_t>(n);
}

void send_all(const Fd& fd, std::span<const uint8_t> data) {
  size_t off = 0;
  while (off < data.size()) {
    const ssize_t n =
        ::send(fd.get(), data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      raise(Errc::io_error, "send: " + errno_text());
    }
    off += static_cast<size_t>(n);
  }
}

bool recv_exact(const Fd& fd, uint8_t* out, size_t len) {
  size_t off = 0;
  while (off < len) {
    const ssize_t n = ::recv(fd.get(), out + off, len - off, 0);
    if (n == 0) {
      if (off == 0) return false;
      raise(Errc::truncated, "peer closed mid-frame");
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      raise(Errc::io_error, "recv: " + errno_text());
    }
    off += static_cast<size_t>(n);
  }
  return true;
}

std::string set_socket_tos(const Fd& fd, uint8_t tos) {
  const int value = tos;
  if (setsockopt(fd.get(), IPPROTO_IP, IP_TOS, &value, sizeof value) != 0) {
    return errno_text();
  }
  return {};
}

Fd make_event_fd() {
  Fd fd(::eventfd(0, EFD_NONBLOCK));
  if (!fd.valid()) raise(Errc::io_error, "eventfd: " + errno_text());
  return fd;
}

void event_signal(const Fd& fd) {
  const uint64_t one = 1;
  [[maybe_unused]] ssize_t n = ::write(fd.get(), &one, sizeof one);
}

void event_drain(const Fd& fd) {
  uint64_t value = 0;
  [[maybe_unused]] ssize_t n = ::read(fd.get(), &value, sizeof value);
}

int poll_readable2(const Fd& a, const Fd& b, int timeout_ms) {
  pollfd fds[2] = {{a.get(), POLLIN, 0}, {b.get(), POLLIN, 0}};
  const int rc = ::poll(fds, 2, timeout_ms);
  if (rc <= 0) return 0;
  int out = 0;
  if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) out |= 1;
  if (fds[1].revents & (POLLIN | POLLHUP | POLLERR)) out |= 2;
  return out;
}

bool poll_readable(const Fd& a, int timeout_ms) {
  pollfd p{a.get(), POLLIN, 0};
  const int rc = ::poll(&p, 1, timeout_ms);
  return rc > 0 && (p.revents & (POLLIN | POLLHUP | POLLERR)) != 0;
}

int poll_many(std::initializer_list<const Fd*> fds, int timeout_ms) {
  pollfd entries[8];
  size_t n = 0;
  for (const Fd* fd : fds) {
    if (n == 8) break;
    entries[n++] = {fd && fd->valid() ? fd->get() : -1, POLLIN, 0};
  }
  const int rc = ::poll(entries, n, timeout_ms);
  if (rc <= 0) return 0;
  int out = 0;
  for (size_t i = 0; i < n; ++i) {
    if (entries[i].revents & (POLLIN | POLLHUP | POLLERR)) out |= 1 << i;
  }
  return out;
}

bool peer_closed(const Fd& fd) {
  char probe;
  const ssize_t n =
      ::recv(fd.get(), &probe, 1, MSG_PEEK | MSG_DONTWAIT);
  return n == 0;
}

std::string peer_host(const Fd& fd) {
  sockaddr_in addr{};
  socklen_t len = sizeof(addr);
  if (::getpeername(fd.get(), reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    raise(Errc::io_error, "getpeername: " + errno_text());
  }
  char text[INET_ADDRSTRLEN] = {};
  if (!::inet_ntop(AF_INET, &addr.sin_addr, text, sizeof(text))) {
    raise(Errc::io_error, "inet_ntop failed");
  }
  return text;
}

void shutdown_both(const Fd& fd) {
  if (fd.valid()) ::shutdown(fd.get(), SHUT_RDWR);
}

}  // namespace prioport::net
