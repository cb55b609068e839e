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

#include <array>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <vector>

namespace prioport::emu {

// One packet as seen by the emulated queues. enqueue_seq is assigned at
// admission, is unique per queue and preserves admission order.
struct EmuPacket {
  uint64_t id = 0;          // engine-assigned, unique per topology run
  uint8_t tos = 0;
  uint32_t size_bytes = 0;  // wire size including per-packet overhead
  uint32_t src = 0;         // admitting node
  uint32_t dst = 0;         // terminating node

  // Segmentation metadata carried end to end.
  uint64_t flow = 0;
  uint64_t message_id = 0;
  uint32_t segment = 0;
  uint32_t segment_count = 1;

  // Acknowledgment plumbing: want_ack marks the final segment of an
  // ack-requested message; ack_size_bytes sizes the reverse packet.
  bool is_ack = false;
  bool want_ack = false;
  uint32_t ack_size_bytes = 0;

  // Carried frame bytes when the emulated network transports live channels;
  // timing-only runs leave it empty.
  std::shared_ptr<const std::vector<uint8_t>> frame;

  uint64_t enqueue_seq = 0;
  uint64_t enqueue_ns = 0;  // admission time at the current queue
};

// Three FIFO bands with strict priority across bands: a lower band is never
// served while a higher band holds packets. Band 0 is highest.
class BandQueue {
 public:
  static constexpr int kBands = 3;
  static constexpr size_t kDefaultBandCapacity = 1000;

  explicit BandQueue(size_t per_band_capacity = kDefaultBandCapacity);

  // Places p at the tail of the band for its TOS byte. Returns false (and
  // counts the drop) when that band is full. Dropping is an outcome, not an
  // error.
  bool enqueue(EmuPacket p);

  // Head of the lowest-index non-empty band, or nullopt when all are empty.
  std::optional<EmuPacket> dequeue();

  size_t size() const;
  size_t band_size(int band) const { return bands_[band].size(); }
  uint64_t drops(int band) const { return drops_[band]; }
  uint64_t total_drops() const;
  bool empty() const { return size() == 0; }

 private:
  size_t capacity_;
  uint64_t next_seq_ = 0;
  std::array<std::deque<EmuPacket>, kBands> bands_;
  std::array<uint64_t, kBands> drops_{};
};

}  // namespace prioport::emu
