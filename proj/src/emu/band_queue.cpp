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

#include "emu/band_queue.hpp"

#include "qos/priority.hpp"

namespace prioport::emu {

BandQueue::BandQueue(size_t per_band_capacity) : capacity_(per_band_capacity) {}

bool BandQueue::enqueue(EmuPacket p) {
  const int band = qos::tos_to_band(p.tos);
  auto& q = bands_[band];
  if (q.size() >= capacity_) {
    ++drops_[band];
    return false;
  }
  p.enqueue_seq = next_seq_++;
  q.push_back(std::move(p));
  return true;
}

std::optional<EmuPacket> BandQueue::dequeue() {
  for (auto& q : bands_) {
    if (!q.empty()) {
      EmuPacket p = std::move(q.front());
      q.pop_front();
      return p;
    }
  }
  return std::nullopt;
}

size_t BandQueue::size() const {
  size_t n = 0;
  for (const auto& q : bands_) n += q.size();
  return n;
}

uint64_t BandQueue::total_drops() const {
  uint64_t n = 0;
  for (uint64_t d : drops_) n += d;
  return n;
}

}  // namespace prioport::emu
