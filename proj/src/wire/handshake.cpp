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

#include "wire/handshake.hpp"

#include <charconv>

#include "common/error.hpp"
#include "wire/frame_io.hpp"

namespace prioport::wire {

const char* session_role_name(SessionRole role) {
  return role == SessionRole::Admin ? "admin" : "data";
}

SessionRole parse_session_role(const std::string& text) {
  if (text == "data") return SessionRole::Data;
  if (text == "admin") return SessionRole::Admin;
  raise(Errc::handshake_failure, "unknown session role '" + text + "'");
}

std::map<std::string, std::string> parse_kv_payload(
    const std::vector<uint8_t>& payload) {
  std::map<std::string, std::string> kv;
  std::string text(payload.begin(), payload.end());
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      raise(Errc::handshake_failure, "malformed handshake line: " + line);
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::vector<uint8_t> render_kv_payload(
    const std::map<std::string, std::string>& kv) {
  std::string text;
  for (const auto& [key, value] : kv) {
    text += key;
    text += '=';
    text += value;
    text += '\n';
  }
  return {text.begin(), text.end()};
}

Frame make_handshake_frame(const HandshakeInfo& info) {
  auto kv = info.extra;
  kv["version"] = std::to_string(info.protocol_version);
  kv["role"] = session_role_name(info.role);
  kv["source"] = info.source_port;
  kv["carrier"] = info.carrier;
  Frame f;
  f.type = FrameType::Handshake;
  f.payload = render_kv_payload(kv);
  return f;
}

HandshakeInfo parse_handshake_frame(const Frame& f) {
  if (f.type != FrameType::Handshake) {
    raise(Errc::handshake_failure, "expected a handshake frame");
  }
  auto kv = parse_kv_payload(f.payload);
  HandshakeInfo info;
  auto take = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) {
      raise(Errc::handshake_failure,
            std::string("handshake missing key '") + key + "'");
    }
    std::string value = std::move(it->second);
    kv.erase(it);
    return value;
  };
  std::string version = take("version");
  int parsed = 0;
  auto [end, ec] =
      std::from_chars(version.data(), version.data() + version.size(), parsed);
  if (ec != std::errc() || end != version.data() + version.size()) {
    raise(Errc::handshake_failure, "bad handshake version '" + version + "'");
  }
  info.protocol_version = parsed;
  info.role = parse_session_role(take("role"));
  info.source_port = take("source");
  info.carrier = take("carrier");
  info.extra = std::move(kv);
  return info;
}

namespace {

std::optional<Frame> recv_frame_deadline(const net::Fd& fd, int timeout_ms) {
  if (!net::poll_readable(fd, timeout_ms)) {
    raise(Errc::timeout, "handshake timed out");
  }
  return recv_frame(fd);
}

}  // namespace

std::map<std::string, std::string> handshake_initiate(const net::Fd& fd,
                                                      const HandshakeInfo& info,
                                                      int timeout_ms) {
  send_frame(fd, make_handshake_frame(info));
  std::optional<Frame> reply;
  try {
    reply = recv_frame_deadline(fd, timeout_ms);
  } catch (const Error& error) {
    if (error.code() == Errc::timeout) throw;
    raise(Errc::handshake_failure, "handshake transport failed");
  }
  if (!reply) {
    raise(Errc::handshake_failure, "peer closed during handshake");
  }
  if (reply->type != FrameType::Handshake) {
    raise(Errc::handshake_failure, "unexpected reply frame type");
  }
  auto kv = parse_kv_payload(reply->payload);
  auto status = kv.find("status");
  if (status == kv.end()) {
    raise(Errc::handshake_failure, "handshake reply lacks a status");
  }
  if (status->second != "ok") {
    auto code = errc_from_token(status->second);
    raise(code.value_or(Errc::handshake_failure),
          "connection rejected: " + status->second);
  }
  kv.erase(status);
  return kv;
}

HandshakeInfo handshake_read(const net::Fd& fd, int timeout_ms) {
  std::optional<Frame> frame;
  try {
    frame = recv_frame_deadline(fd, timeout_ms);
  } catch (const Error& error) {
    if (error.code() == Errc::timeout) throw;
    raise(Errc::handshake_failure, "handshake transport failed");
  }
  if (!frame) {
    raise(Errc::handshake_failure, "peer closed during handshake");
  }
  return parse_handshake_frame(*frame);
}

void handshake_reply(const net::Fd& fd, const std::string& error_token,
                     const std::map<std::string, std::string>& reply_keys) {
  auto kv = reply_keys;
  kv["status"] = error_token.empty() ? "ok" : error_token;
  Frame f;
  f.type = FrameType::Handshake;
  f.payload = render_kv_payload(kv);
  send_frame(fd, f);
}

}  // namespace prioport::wire
