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

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "common/error.hpp"

namespace prioport::wire {

// Carrier names accepted on the wire and in CLI flags. "emu" runs raw
// 1500-byte packets; "emu:tcp" / "emu:udp" emulate the on-wire footprint of
// the respective real carrier (segment sizes and per-segment overhead) so
// emulated benchmarks expose carrier differences.
inline constexpr const char* kCarrierTcp = "tcp";
inline constexpr const char* kCarrierUdp = "udp";
inline constexpr const char* kCarrierEmu = "emu";
inline constexpr const char* kCarrierEmuTcp = "emu:tcp";
inline constexpr const char* kCarrierEmuUdp = "emu:udp";

// Largest frame (header + payload) accepted for one udp datagram.
inline constexpr size_t kUdpMaxFrameBytes = 60 * 1024;

// How one encoded frame maps onto link-level packets: at most
// max_seg_payload frame bytes per packet plus per_seg_overhead_bytes of
// protocol headers on the wire.
struct CarrierProfile {
  uint32_t max_seg_payload = 1500;
  uint32_t per_seg_overhead_bytes = 0;
};

inline constexpr CarrierProfile kProfileEmuRaw{1500, 0};
// 1500-byte MTU minus 40 bytes of IP+TCP headers.
inline constexpr CarrierProfile kProfileEmuTcp{1460, 40};
// 1500-byte MTU minus 28 bytes of IP+UDP headers (fragments modeled with
// the same uniform footprint).
inline constexpr CarrierProfile kProfileEmuUdp{1472, 28};

inline bool is_emu_carrier(std::string_view carrier) {
  return carrier == kCarrierEmu || carrier == kCarrierEmuTcp ||
         carrier == kCarrierEmuUdp;
}

inline bool is_known_carrier(std::string_view carrier) {
  return carrier == kCarrierTcp || carrier == kCarrierUdp ||
         is_emu_carrier(carrier);
}

inline CarrierProfile emu_profile(std::string_view carrier) {
  if (carrier == kCarrierEmuTcp) return kProfileEmuTcp;
  if (carrier == kCarrierEmuUdp) return kProfileEmuUdp;
  if (carrier == kCarrierEmu) return kProfileEmuRaw;
  raise(Errc::carrier_unsupported,
        "not an emulated carrier: " + std::string(carrier));
}

inline uint32_t segment_count(const CarrierProfile& profile,
                              size_t frame_bytes) {
  if (frame_bytes == 0) return 1;
  return static_cast<uint32_t>((frame_bytes + profile.max_seg_payload - 1) /
                               profile.max_seg_payload);
}

// Wire bytes of segment `index` (0-based) out of `count` for a frame of
// `frame_bytes`: a full segment except possibly the last, plus overhead.
inline uint32_t segment_wire_bytes(const CarrierProfile& profile,
                                   size_t frame_bytes, uint32_t index,
                                   uint32_t count) {
  const size_t full = profile.max_seg_payload;
  size_t seg_payload =
      (index + 1 < count) ? full : frame_bytes - size_t{index} * full;
  if (frame_bytes == 0) seg_payload = 0;
  return static_cast<uint32_t>(seg_payload + profile.per_seg_overhead_bytes);
}

}  // namespace prioport::wire
