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

#include "name_server/server.hpp"

#include <sys/socket.h>

#include <charconv>
#include <sstream>
#include <utility>

#include "common/error.hpp"
#include "net/line_reader.hpp"

namespace prioport::ns {
namespace {

std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> words;
  std::istringstream in(line);
  std::string word;
  while (in >> word) words.push_back(std::move(word));
  return words;
}

std::string err_reply(Errc code) {
  return std::string("ERR ") + errc_token(code) + "\n";
}

}  // namespace

NameServer::NameServer(const std::string& host, uint16_t port) : host_(host) {
  listener_ = net::tcp_listen(host, port);
  port_ = net::local_port(listener_);
  acceptor_ = std::thread([this] { accept_loop(); });
}

NameServer::~NameServer() { stop(); }

void NameServer::stop() {
  if (stopping_.exchange(true)) {
    if (acceptor_.joinable()) acceptor_.join();
    return;
  }
  net::shutdown_both(listener_);
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(workers_mu_);
    for (int fd : conns_) ::shutdown(fd, SHUT_RDWR);
    workers = std::move(workers_);
  }
  for (auto& worker : workers) worker.join();
}

void NameServer::accept_loop() {
  while (!stopping_.load()) {
    auto conn = net::tcp_accept(listener_);
    if (!conn) break;
    std::lock_guard lock(workers_mu_);
    if (stopping_.load()) break;
    conns_.insert(conn->get());
    workers_.emplace_back(
        [this, fd = std::move(*conn)]() mutable { serve_connection(std::move(fd)); });
  }
}

void NameServer::serve_connection(net::Fd conn) {
  net::LineReader reader(conn);
  for (;;) {
    auto line = reader.read_line();
    if (!line) break;
    std::string reply = handle_line(*line);
    try {
      net::send_all(conn, {reinterpret_cast<const uint8_t*>(reply.data()),
                           reply.size()});
    } catch (const Error&) {
      break;
    }
  }
  {
    std::lock_guard lock(workers_mu_);
    conns_.erase(conn.get());
  }
  conn.reset();
}

std::string NameServer::handle_line(const std::string& line) {
  auto words = split_words(line);
  if (words.empty()) return err_reply(Errc::syntax_error);
  const std::string& verb = words[0];
  try {
    if (verb == "REGISTER") {
      if (words.size() != 5) return err_reply(Errc::syntax_error);
      uint32_t port = 0;
      auto [end, ec] = std::from_chars(words[3].data(),
                                       words[3].data() + words[3].size(), port);
      if (ec != std::errc() || end != words[3].data() + words[3].size() ||
          port == 0 || port > 65535) {
        return err_reply(Errc::syntax_error);
      }
      registry_.add(words[1],
                    {words[2], static_cast<uint16_t>(port), words[4]});
      return "OK\n";
    }
    if (verb == "QUERY") {
      if (words.size() != 2) return err_reply(Errc::syntax_error);
      auto found = registry_.find(words[1]);
      if (!found) return err_reply(Errc::not_found);
      std::ostringstream out;
      out << "OK " << found->host << ' ' << found->port << ' '
          << found->carrier << '\n';
      return out.str();
    }
    if (verb == "UNREGISTER") {
      if (words.size() != 2) return err_reply(Errc::syntax_error);
      registry_.remove(words[1]);
      return "OK\n";
    }
    if (verb == "LIST") {
      if (words.size() != 1) return err_reply(Errc::syntax_error);
      auto entries = registry_.snapshot();
      std::ostringstream out;
      out << "OK " << entries.size() << '\n';
      for (const auto& [name, endpoint] : entries) {
        out << name << ' ' << endpoint.host << ' ' << endpoint.port << ' '
            << endpoint.carrier << '\n';
      }
      return out.str();
    }
  } catch (const Error& error) {
    return err_reply(error.code());
  }
  return err_reply(Errc::unknown_verb);
}

}  // namespace prioport::ns
