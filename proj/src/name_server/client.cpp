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

#include "name_server/client.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>

#include "common/error.hpp"

namespace prioport::ns {
namespace {

uint16_t parse_port_token(const std::string& text) {
  uint32_t port = 0;
  auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), port);
  if (ec != std::errc() || end != text.data() + text.size() || port == 0 ||
      port > 65535) {
    raise(Errc::usage, "bad port number '" + text + "'");
  }
  return static_cast<uint16_t>(port);
}

}  // namespace

std::pair<std::string, uint16_t> parse_hostport(const std::string& text) {
  auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    raise(Errc::usage, "expected host:port, got '" + text + "'");
  }
  return {text.substr(0, colon), parse_port_token(text.substr(colon + 1))};
}

NameClient::NameClient(std::string host, uint16_t port)
    : host_(std::move(host)), port_(port) {}

NameClient NameClient::from_env(const std::string& override_hostport) {
  if (!override_hostport.empty()) {
    auto [host, port] = parse_hostport(override_hostport);
    return {host, port};
  }
  if (const char* env = std::getenv(kNameServerEnv); env && *env) {
    auto [host, port] = parse_hostport(env);
    return {host, port};
  }
  return {kDefaultNameServerHost, kDefaultNameServerPort};
}

void NameClient::connect_locked() {
  conn_ = net::tcp_connect(host_, port_);
  reader_.emplace(conn_);
}

void NameClient::close() {
  std::lock_guard lock(mu_);
  reader_.reset();
  conn_.reset();
}

std::vector<std::string> NameClient::exchange(const std::string& line,
                                              bool multi) {
  std::lock_guard lock(mu_);
  std::string wire = line + "\n";
  for (int attempt = 0;; ++attempt) {
    try {
      if (!conn_.valid()) connect_locked();
      net::send_all(conn_, {reinterpret_cast<const uint8_t*>(wire.data()),
                            wire.size()});
      auto first = reader_->read_line();
      if (!first) raise(Errc::io_error, "name server closed the connection");
      std::vector<std::string> lines{*first};
      if (multi && first->rfind("OK ", 0) == 0) {
        size_t count = std::strtoull(first->c_str() + 3, nullptr, 10);
        for (size_t i = 0; i < count; ++i) {
          auto entry = reader_->read_line();
          if (!entry) raise(Errc::io_error, "listing truncated");
          lines.push_back(*entry);
        }
      }
      return lines;
    } catch (const Error&) {
      reader_.reset();
      conn_.reset();
      if (attempt >= 1) {
        raise(Errc::server_unreachable,
              "name server at " + host_ + ":" + std::to_string(port_) +
                  " is unreachable");
      }
    }
  }
}

void NameClient::throw_reply_error(const std::string& reply) {
  if (reply.rfind("ERR ", 0) == 0) {
    auto code = errc_from_token(reply.substr(4));
    raise(code.value_or(Errc::io_error), "name server: " + reply);
  }
  raise(Errc::io_error, "unexpected name server reply: " + reply);
}

void NameClient::register_name(const std::string& name,
                               const EndpointTriplet& endpoint) {
  std::ostringstream line;
  line << "REGISTER " << name << ' ' << endpoint.host << ' ' << endpoint.port
       << ' ' << endpoint.carrier;
  auto reply = exchange(line.str(), false);
  if (reply[0] != "OK") throw_reply_error(reply[0]);
}

std::optional<EndpointTriplet> NameClient::try_lookup(const std::string& name) {
  auto reply = exchange("QUERY " + name, false);
  if (reply[0] == "ERR not-found") return std::nullopt;
  std::istringstream in(reply[0]);
  std::string ok, host, port_text, carrier;
  if (in >> ok >> host >> port_text >> carrier && ok == "OK") {
    return EndpointTriplet{host, parse_port_token(port_text), carrier};
  }
  throw_reply_error(reply[0]);
}

EndpointTriplet NameClient::lookup(const std::string& name) {
  auto found = try_lookup(name);
  if (!found) raise(Errc::not_found, "no port named '" + name + "'");
  return *found;
}

void NameClient::unregister(const std::string& name) {
  auto reply = exchange("UNREGISTER " + name, false);
  if (reply[0] != "OK") throw_reply_error(reply[0]);
}

std::vector<std::pair<std::string, EndpointTriplet>> NameClient::list() {
  auto reply = exchange("LIST", true);
  if (reply[0].rfind("OK ", 0) != 0) throw_reply_error(reply[0]);
  std::vector<std::pair<std::string, EndpointTriplet>> entries;
  for (size_t i = 1; i < reply.size(); ++i) {
    std::istringstream in(reply[i]);
    std::string name, host, port_text, carrier;
    if (!(in >> name >> host >> port_text >> carrier)) {
      raise(Errc::io_error, "bad listing entry: " + reply[i]);
    }
    entries.emplace_back(
        name, EndpointTriplet{host, parse_port_token(port_text), carrier});
  }
  return entries;
}

}  // namespace prioport::ns
