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

#include "wire/frame.hpp"

#include <cstring>
#include <limits>

#include "common/error.hpp"

namespace prioport::wire {

namespace {

void put_u64(uint8_t* out, uint64_t v) {
  for (int i = 7; i >= 0; --i) {
    out[7 - i] = static_cast<uint8_t>(v >> (i * 8));
  }
}

void put_u32(uint8_t* out, uint32_t v) {
  for (int i = 3; i >= 0; --i) {
    out[3 - i] = static_cast<uint8_t>(v >> (i * 8));
  }
}

uint64_t get_u64(const uint8_t* in) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | in[i];
  return v;
}

uint32_t get_u32(const uint8_t* in) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | in[i];
  return v;
}

bool known_type(uint8_t b) {
  return b <= static_cast<uint8_t>(FrameType::Handshake);
}

}  // namespace

std::vector<uint8_t> encode_frame(const Frame& f) {
  if (f.payload.size() > std::numeric_limits<uint32_t>::max()) {
    raise(Errc::payload_too_large, "frame payload exceeds 32-bit length field");
  }
  std::vector<uint8_t> out(kHeaderSize + f.payload.size());
  out[0] = kMagic0;
  out[1] = kMagic1;
  out[2] = kProtocolVersion;
  out[3] = static_cast<uint8_t>(f.type);
  out[4] = f.flags;
  put_u64(out.data() + 5, f.message_id);
  put_u64(out.data() + 13, f.timestamp_ns);
  put_u32(out.data() + 21, static_cast<uint32_t>(f.payload.size()));
  if (!f.payload.empty()) {
    std::memcpy(out.data() + kHeaderSize, f.payload.data(), f.payload.size());
  }
  return out;
}

DecodeResult decode_frame(std::span<const uint8_t> bytes) {
  DecodeResult r;
  if (bytes.size() < 2) {
    // With under two bytes, prefer "need more" unless the first byte already
    // rules the magic out.
    if (!bytes.empty() && bytes[0] != kMagic0) {
      r.status = DecodeStatus::bad_magic;
    } else {
      r.status = DecodeStatus::truncated;
    }
    return r;
  }
  if (bytes[0] != kMagic0 || bytes[1] != kMagic1) {
    r.status = DecodeStatus::bad_magic;
    return r;
  }
  if (bytes.size() < 3) {
    r.status = DecodeStatus::truncated;
    return r;
  }
  if (bytes[2] != kProtocolVersion) {
    r.status = DecodeStatus::unknown_version;
    return r;
  }
  if (bytes.size() < 4) {
    r.status = DecodeStatus::truncated;
    return r;
  }
  if (!known_type(bytes[3])) {
    r.status = DecodeStatus::unknown_type;
    return r;
  }
  if (bytes.size() < kHeaderSize) {
    r.status = DecodeStatus::truncated;
    return r;
  }
  const uint32_t payload_len = get_u32(bytes.data() + 21);
  if (bytes.size() < kHeaderSize + static_cast<size_t>(payload_len)) {
    r.status = DecodeStatus::truncated;
    return r;
  }
  r.status = DecodeStatus::ok;
  r.frame.type = static_cast<FrameType>(bytes[3]);
  r.frame.flags = bytes[4];
  r.frame.message_id = get_u64(bytes.data() + 5);
  r.frame.timestamp_ns = get_u64(bytes.data() + 13);
  r.frame.payload.assign(bytes.begin() + kHeaderSize,
                         bytes.begin() + kHeaderSize + payload_len);
  r.consumed = kHeaderSize + payload_len;
  return r;
}

Frame make_ack(uint64_t message_id, uint64_t timestamp_ns) {
  Frame f;
  f.type = FrameType::Ack;
  f.message_id = message_id;
  f.timestamp_ns = timestamp_ns;
  return f;
}

}  // namespace prioport::wire
