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

#include <doctest.h>

#include <random>

#include "wire/frame.hpp"

using namespace prioport::wire;

namespace {

Frame random_frame(std::mt19937_64& rng) {
  Frame f;
  f.type = static_cast<FrameType>(rng() % 5);
  f.flags = static_cast<uint8_t>(rng() & 0xFF);
  f.message_id = rng();
  f.timestamp_ns = rng();
  f.payload.resize(rng() % 2048);
  for (auto& b : f.payload) b = static_cast<uint8_t>(rng() & 0xFF);
  return f;
}

}  // namespace

TEST_CASE("all-zero data frame encodes to the fixed 25-byte header") {
  Frame f;  // Data, flags 0, id 0, timestamp 0, empty payload
  auto bytes = encode_frame(f);
  const std::vector<uint8_t> expected = {
      0x59, 0x50, 0x01, 0x00, 0x00,                    // magic, version, type, flags
      0,    0,    0,    0,    0,    0, 0, 0,           // message id
      0,    0,    0,    0,    0,    0, 0, 0,           // timestamp
      0,    0,    0,    0,                             // payload length
  };
  CHECK(bytes == expected);
}

TEST_CASE("ack frame id=7 timestamp=1000 encodes to hand-computed bytes") {
  Frame f;
  f.type = FrameType::Ack;
  f.message_id = 7;
  f.timestamp_ns = 1000;
  auto bytes = encode_frame(f);
  const std::vector<uint8_t> expected = {
      0x59, 0x50, 0x01, 0x01, 0x00,
      0,    0,    0,    0,    0,    0, 0, 7,
      0,    0,    0,    0,    0,    0, 0x03, 0xE8,
      0,    0,    0,    0,
  };
  CHECK(bytes == expected);
}

TEST_CASE("make_ack echoes id and timestamp with empty payload") {
  Frame ack = make_ack(42, 987654321);
  CHECK(ack.type == FrameType::Ack);
  CHECK(ack.message_id == 42);
  CHECK(ack.timestamp_ns == 987654321);
  CHECK(ack.payload.empty());
  CHECK(ack.flags == 0);
}

TEST_CASE("decode inverts encode and reports exact consumption") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    Frame f = random_frame(rng);
    auto bytes = encode_frame(f);
    auto r = decode_frame(bytes);
    REQUIRE(r.status == DecodeStatus::ok);
    CHECK(r.frame == f);
    CHECK(r.consumed == bytes.size());
  }
}

TEST_CASE("a header declaring payload 10 followed by 4 bytes is truncated") {
  Frame f;
  f.payload.assign(10, 0xAB);
  auto bytes = encode_frame(f);
  bytes.resize(kHeaderSize + 4);
  auto r = decode_frame(bytes);
  CHECK(r.status == DecodeStatus::truncated);
  CHECK(r.consumed == 0);
}

TEST_CASE("leading garbage classifies as bad magic") {
  std::vector<uint8_t> bytes = {0xFF, 0x00, 0x01};
  CHECK(decode_frame(bytes).status == DecodeStatus::bad_magic);
  bytes = {0x59, 0x51};  // second magic byte wrong
  CHECK(decode_frame(bytes).status == DecodeStatus::bad_magic);
}

TEST_CASE("a single valid magic byte means more bytes are needed") {
  std::vector<uint8_t> bytes = {0x59};
  CHECK(decode_frame(bytes).status == DecodeStatus::truncated);
  CHECK(decode_frame({}).status == DecodeStatus::truncated);
}

TEST_CASE("unknown version and type are classified distinctly") {
  Frame f;
  auto bytes = encode_frame(f);
  auto v = bytes;
  v[2] = 0x63;
  CHECK(decode_frame(v).status == DecodeStatus::unknown_version);
  auto t = bytes;
  t[3] = 0x09;
  CHECK(decode_frame(t).status == DecodeStatus::unknown_type);
}

TEST_CASE("concatenated frames decode in order from a stream buffer") {
  std::mt19937_64 rng(11);
  std::vector<Frame> frames;
  std::vector<uint8_t> stream;
  for (int i = 0; i < 20; ++i) {
    frames.push_back(random_frame(rng));
    auto bytes = encode_frame(frames.back());
    stream.insert(stream.end(), bytes.begin(), bytes.end());
  }
  size_t off = 0;
  for (const Frame& expected : frames) {
    auto r = decode_frame(std::span(stream).subspan(off));
    REQUIRE(r.status == DecodeStatus::ok);
    CHECK(r.frame == expected);
    off += r.consumed;
  }
  CHECK(off == stream.size());
}

TEST_CASE("decode is total over random byte soup") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20000; ++i) {
    std::vector<uint8_t> bytes(rng() % 64);
    for (auto& b : bytes) b = static_cast<uint8_t>(rng() & 0xFF);
    auto r = decode_frame(bytes);  // must classify, never crash or over-read
    if (r.status == DecodeStatus::ok) {
      CHECK(r.consumed <= bytes.size());
      CHECK(r.consumed == kHeaderSize + r.frame.payload.size());
    } else {
      CHECK(r.consumed == 0);
    }
  }
}

TEST_CASE("mutated valid frames never decode to the original") {
  // Flipping any header byte of an encoded frame must change the outcome:
  // either a decode error or a different frame, never a silent match.
  Frame f;
  f.type = FrameType::Data;
  f.flags = 1;
  f.message_id = 0x1122334455667788;
  f.timestamp_ns = 0x99AABBCCDDEEFF00;
  f.payload = {1, 2, 3};
  auto bytes = encode_frame(f);
  for (size_t i = 0; i < kHeaderSize; ++i) {
    auto mutated = bytes;
    mutated[i] ^= 0x40;
    auto r = decode_frame(mutated);
    if (r.status == DecodeStatus::ok) CHECK(!(r.frame == f));
  }
}
