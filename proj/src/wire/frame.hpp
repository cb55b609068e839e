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
#include <optional>
#include <span>
#include <vector>

namespace prioport::wire {

// Wire layout, fixed 25-byte header, big-endian multi-byte fields:
//
//   offset 0   magic      0x59 0x50
//   offset 2   version    0x01
//   offset 3   type       FrameType
//   offset 4   flags      bit 0 = ack requested
//   offset 5   message id 8 bytes
//   offset 13  timestamp  8 bytes, sender monotonic nanoseconds
//   offset 21  length     4 bytes, payload byte count
//   offset 25  payload
//
// This layout is the compatibility contract for every tool in the repo.

inline constexpr uint8_t kMagic0 = 0x59;
inline constexpr uint8_t kMagic1 = 0x50;
inline constexpr uint8_t kProtocolVersion = 1;
inline constexpr size_t kHeaderSize = 25;
inline constexpr uint8_t kFlagAckRequested = 0x01;

enum class FrameType : uint8_t {
  Data = 0,
  Ack = 1,
  AdminRequest = 2,
  AdminReply = 3,
  Handshake = 4,
};

struct Frame {
  FrameType type = FrameType::Data;
  uint8_t flags = 0;
  uint64_t message_id = 0;
  uint64_t timestamp_ns = 0;
  std::vector<uint8_t> payload;

  bool operator==(const Frame&) const = default;

  bool ack_requested() const { return (flags & kFlagAckRequested) != 0; }
};

enum class DecodeStatus {
  ok,
  truncated,  // need more bytes, not an encoding error
  bad_magic,
  unknown_version,
  unknown_type,
};

struct DecodeResult {
  DecodeStatus status = DecodeStatus::truncated;
  Frame frame;
  // Bytes consumed from the input when status == ok, else 0.
  size_t consumed = 0;
};

// Throws Error{payload_too_large} when the payload does not fit in 32 bits.
std::vector<uint8_t> encode_frame(const Frame& f);

// Total over arbitrary byte input: classifies exactly one leading frame or
// reports why it cannot. Never reads past the declared payload length.
DecodeResult decode_frame(std::span<const uint8_t> bytes);

// Convenience for ACK construction: echoes the id and timestamp of the DATA
// frame being acknowledged, empty payload.
Frame make_ack(uint64_t message_id, uint64_t timestamp_ns);

}  // namespace prioport::wire
