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
#include <vector>

#include "emu/band_queue.hpp"

using namespace prioport::emu;

namespace {

constexpr uint8_t kTosForBand[3] = {0x90, 0x00, 0x28};

EmuPacket packet(uint64_t id, int band) {
  EmuPacket p;
  p.id = id;
  p.tos = kTosForBand[band];
  p.size_bytes = 100;
  return p;
}

// Reference model: three plain vectors, no shared bookkeeping.
struct Reference {
  std::vector<uint64_t> bands[3];
  uint64_t drops[3] = {0, 0, 0};
  size_t capacity;

  explicit Reference(size_t cap) : capacity(cap) {}

  bool enqueue(uint64_t id, int band) {
    if (bands[band].size() >= capacity) {
      ++drops[band];
      return false;
    }
    bands[band].push_back(id);
    return true;
  }

  std::optional<uint64_t> dequeue() {
    for (auto& b : bands) {
      if (!b.empty()) {
        uint64_t id = b.front();
        b.erase(b.begin());
        return id;
      }
    }
    return std::nullopt;
  }
};

}  // namespace

TEST_CASE("higher bands always drain first") {
  BandQueue q;
  CHECK(q.enqueue(packet(1, 2)));
  CHECK(q.enqueue(packet(2, 1)));
  CHECK(q.enqueue(packet(3, 0)));
  CHECK(q.dequeue()->id == 3);
  CHECK(q.dequeue()->id == 2);
  CHECK(q.dequeue()->id == 1);
  CHECK(!q.dequeue().has_value());
}

TEST_CASE("order within one band is first-in first-out") {
  BandQueue q;
  q.enqueue(packet(1, 1));
  q.enqueue(packet(2, 1));
  q.enqueue(packet(3, 1));
  CHECK(q.dequeue()->id == 1);
  CHECK(q.dequeue()->id == 2);
  CHECK(q.dequeue()->id == 3);
}

TEST_CASE("a full band drops and counts, other bands unaffected") {
  BandQueue q(2);
  CHECK(q.enqueue(packet(1, 1)));
  CHECK(q.enqueue(packet(2, 1)));
  CHECK(!q.enqueue(packet(3, 1)));
  CHECK(q.drops(1) == 1);
  CHECK(q.total_drops() == 1);
  CHECK(q.enqueue(packet(4, 0)));  // band 0 still has room
  CHECK(q.band_size(1) == 2);
  CHECK(q.size() == 3);
}

TEST_CASE("admission numbering is unique and order-preserving") {
  BandQueue q;
  q.enqueue(packet(1, 0));
  q.enqueue(packet(2, 2));
  q.enqueue(packet(3, 0));
  auto a = q.dequeue();
  auto b = q.dequeue();
  auto c = q.dequeue();
  CHECK(a->enqueue_seq == 0);
  CHECK(b->enqueue_seq == 2);  // the later band-0 packet
  CHECK(c->enqueue_seq == 1);
  CHECK(a->enqueue_seq < b->enqueue_seq);
}

TEST_CASE("random operation streams match the reference model") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    size_t cap = 1 + rng() % 4;
    BandQueue q(cap);
    Reference ref(cap);
    uint64_t next_id = 1;
    for (int op = 0; op < 200; ++op) {
      if (rng() % 2) {
        int band = rng() % 3;
        uint64_t id = next_id++;
        CHECK(q.enqueue(packet(id, band)) == ref.enqueue(id, band));
      } else {
        auto got = q.dequeue();
        auto want = ref.dequeue();
        CHECK(got.has_value() == want.has_value());
        if (got && want) CHECK(got->id == *want);
      }
    }
    for (int band = 0; band < 3; ++band) CHECK(q.drops(band) == ref.drops[band]);
    CHECK(q.size() == ref.bands[0].size() + ref.bands[1].size() + ref.bands[2].size());
  }
}
