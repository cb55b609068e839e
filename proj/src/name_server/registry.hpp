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
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prioport::ns {

// The record sufficient to establish a connection without any further
// server contact: address, port number and carrier name.
struct EndpointTriplet {
  std::string host;
  uint16_t port = 0;
  std::string carrier = "tcp";

  bool operator==(const EndpointTriplet&) const = default;
};

// Throws Error{malformed_name} unless the name starts with '/', has at
// least one further character and contains no whitespace.
void validate_port_name(std::string_view name);

// The name -> endpoint partial function. Thread-safe; every operation is a
// single atomic step against the map.
class Registry {
 public:
  // Idempotent for an identical endpoint; throws
  // Error{name_already_registered} when the name is held with a different
  // endpoint, Error{malformed_name} for bad names.
  void add(const std::string& name, const EndpointTriplet& endpoint);

  std::optional<EndpointTriplet> find(const std::string& name) const;

  // Idempotent: absent names succeed.
  void remove(const std::string& name);

  std::vector<std::pair<std::string, EndpointTriplet>> snapshot() const;

  size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, EndpointTriplet> entries_;
};

}  // namespace prioport::ns
