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

#include "wire/frame_io.hpp"

#include <array>

#include "common/error.hpp"

namespace prioport::wire {

void send_frame(const net::Fd& fd, const Frame& f) {
  auto bytes = encode_frame(f);
  net::send_all(fd, bytes);
}

std::optional<Frame> recv_frame(const net::Fd& fd) {
  std::array<uint8_t, kHeaderSize> header;
  if (!net::recv_exact(fd, header.data(), header.size())) return std::nullopt;

  auto probe = decode_frame(header);
  if (probe.status == DecodeStatus::bad_magic) {
    raise(Errc::bad_magic, "stream desynchronized: bad frame magic");
  }
  if (probe.status == DecodeStatus::unknown_version) {
    raise(Errc::unknown_version, "unsupported frame version");
  }
  if (probe.status == DecodeStatus::unknown_type) {
    raise(Errc::unknown_type, "unsupported frame type");
  }

  const uint32_t payload_len =
      (uint32_t{header[21]} << 24) | (uint32_t{header[22]} << 16) |
      (uint32_t{header[23]} << 8) | uint32_t{header[24]};
  std::vector<uint8_t> buffer(header.begin(), header.end());
  buffer.resize(kHeaderSize + payload_len);
  if (payload_len > 0 &&
      !net::recv_exact(fd, buffer.data() + kHeaderSize, payload_len)) {
    raise(Errc::truncated, "connection closed mid-frame");
  }
  auto result = decode_frame(buffer);
  if (result.status != DecodeStatus::ok) {
    raise(Errc::io_error, "frame failed to decode after full read");
  }
  return std::move(result.frame);
}

}  // namespace prioport::wire
