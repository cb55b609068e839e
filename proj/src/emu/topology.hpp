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
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace prioport::emu {

// 1 Gbit/s expressed in bytes, the default link speed.
inline constexpr uint64_t kDefaultRateBytesPerSec = 125'000'000;
inline constexpr uint32_t kMaxPacketBytes = 1500;

enum class NodeKind : uint8_t { Host, Switch };

// One direction of a full-duplex link. Every wire has its own three-band
// egress queue in the engine.
struct Wire {
  uint32_t from = 0;
  uint32_t to = 0;
  uint64_t rate_bytes_per_sec = kDefaultRateBytesPerSec;
  uint64_t propagation_delay_ns = 0;
};

// Static description of hosts, at most one switch, and the links between
// them. Routing is two-hop at most: a direct link when one is declared,
// otherwise through the switch.
class Topology {
 public:
  uint32_t add_host(const std::string& name);
  uint32_t add_switch(const std::string& name);

  // Declares a full-duplex link (two wires) between two declared nodes.
  void add_link(const std::string& a, const std::string& b,
                uint64_t rate_bytes_per_sec = kDefaultRateBytesPerSec,
                uint64_t propagation_delay_ns = 0);

  bool has_node(const std::string& name) const;
  // Throws Error{unknown_host} for undeclared names.
  uint32_t node(const std::string& name) const;
  const std::string& node_name(uint32_t id) const { return nodes_[id].name; }
  NodeKind node_kind(uint32_t id) const { return nodes_[id].kind; }
  size_t node_count() const { return nodes_.size(); }

  const std::vector<Wire>& wires() const { return wires_; }

  // Index of the wire a packet at `at` must take toward `dst`. Throws
  // Error{unknown_host} when no direct link or switch path exists.
  uint32_t next_wire(uint32_t at, uint32_t dst) const;

  // Declarative text form, one statement per line:
  //
  //   # comment
  //   host host1
  //   switch sw0
  //   link host1 sw0 125000000 1000
  //
  // link rate (bytes/second) and propagation delay (nanoseconds) are
  // optional and default to 1 Gbit/s and zero.
  static Topology parse(std::string_view text);

 private:
  struct Node {
    std::string name;
    NodeKind kind = NodeKind::Host;
  };

  uint32_t add_node(const std::string& name, NodeKind kind);

  std::vector<Node> nodes_;
  std::map<std::string, uint32_t, std::less<>> by_name_;
  std::vector<Wire> wires_;
  std::map<std::pair<uint32_t, uint32_t>, uint32_t> wire_index_;
  int switch_node_ = -1;
};

}  // namespace prioport::emu
