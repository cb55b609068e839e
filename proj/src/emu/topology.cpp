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

#include "emu/topology.hpp"

#include <charconv>
#include <sstream>

#include "common/error.hpp"

namespace prioport::emu {

uint32_t Topology::add_node(const std::string& name, NodeKind kind) {
  if (auto it = by_name_.find(name); it != by_name_.end()) {
    const uint32_t id = it->second;
    if (nodes_[id].kind != kind) {
      raise(Errc::unknown_host, "node '" + name + "' redeclared as a different kind");
    }
    return id;
  }
  const auto id = static_cast<uint32_t>(nodes_.size());
  nodes_.push_back({name, kind});
  by_name_.emplace(name, id);
  return id;
}

uint32_t Topology::add_host(const std::string& name) {
  return add_node(name, NodeKind::Host);
}

uint32_t Topology::add_switch(const std::string& name) {
  if (switch_node_ >= 0 && nodes_[switch_node_].name != name) {
    raise(Errc::unknown_host, "only one switch is supported");
  }
  const uint32_t id = add_node(name, NodeKind::Switch);
  switch_node_ = static_cast<int>(id);
  return id;
}

void Topology::add_link(const std::string& a, const std::string& b,
                        uint64_t rate_bytes_per_sec,
                        uint64_t propagation_delay_ns) {
  const uint32_t na = node(a);
  const uint32_t nb = node(b);
  if (na == nb) raise(Errc::unknown_host, "link endpoints must differ");
  if (rate_bytes_per_sec == 0) {
    raise(Errc::unknown_host, "link rate must be positive");
  }
  for (auto [from, to] : {std::pair{na, nb}, std::pair{nb, na}}) {
    if (wire_index_.contains({from, to})) {
      raise(Errc::unknown_host,
            "duplicate link between '" + a + "' and '" + b + "'");
    }
    Wire w;
    w.from = from;
    w.to = to;
    w.rate_bytes_per_sec = rate_bytes_per_sec;
    w.propagation_delay_ns = propagation_delay_ns;
    wire_index_.emplace(std::pair{from, to},
                        static_cast<uint32_t>(wires_.size()));
    wires_.push_back(w);
  }
}

bool Topology::has_node(const std::string& name) const {
  return by_name_.contains(name);
}

uint32_t Topology::node(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) {
    raise(Errc::unknown_host, "unknown node '" + name + "'");
  }
  return it->second;
}

uint32_t Topology::next_wire(uint32_t at, uint32_t dst) const {
  if (auto it = wire_index_.find({at, dst}); it != wire_index_.end()) {
    return it->second;
  }
  if (switch_node_ >= 0 && at != static_cast<uint32_t>(switch_node_)) {
    const auto via = std::pair{at, static_cast<uint32_t>(switch_node_)};
    if (auto it = wire_index_.find(via); it != wire_index_.end()) {
      // The switch must in turn reach dst; validate now so a bad route
      // fails at admission rather than mid-flight.
      if (wire_index_.contains({static_cast<uint32_t>(switch_node_), dst})) {
        return it->second;
      }
    }
  }
  raise(Errc::unknown_host, "no route from '" + nodes_[at].name + "' to '" +
                                nodes_[dst].name + "'");
}

Topology Topology::parse(std::string_view text) {
  Topology t;
  std::istringstream lines{std::string(text)};
  std::string line;
  size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    std::istringstream words(line);
    std::string keyword;
    if (!(words >> keyword)) continue;  // blank line

    auto fail = [&](const std::string& what) {
      raise(Errc::syntax_error,
            "topology line " + std::to_string(lineno) + ": " + what);
    };

    if (keyword == "host" || keyword == "switch") {
      std::string name;
      if (!(words >> name)) fail("expected a node name");
      if (keyword == "host") t.add_host(name);
      else t.add_switch(name);
    } else if (keyword == "link") {
      std::string a, b;
      if (!(words >> a >> b)) fail("expected two node names");
      uint64_t rate = kDefaultRateBytesPerSec;
      uint64_t delay = 0;
      std::string tok;
      auto parse_u64 = [&](const std::string& s, uint64_t* out) {
        auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
        if (ec != std::errc() || end != s.data() + s.size()) {
          fail("expected a number, got '" + s + "'");
        }
      };
      if (words >> tok) {
        parse_u64(tok, &rate);
        if (words >> tok) parse_u64(tok, &delay);
      }
      t.add_link(a, b, rate, delay);
    } else {
      fail("unknown keyword '" + keyword + "'");
    }
    std::string extra;
    if (words >> extra) fail("trailing input '" + extra + "'");
  }
  return t;
}

}  // namespace prioport::emu
