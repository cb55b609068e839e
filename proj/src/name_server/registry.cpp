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

#include "name_server/registry.hpp"

#include <cctype>

#include "common/error.hpp"

namespace prioport::ns {

void validate_port_name(std::string_view name) {
  if (name.size() < 2 || name[0] != '/') {
    raise(Errc::malformed_name,
          "port name must be '/' followed by at least one character");
  }
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      raise(Errc::malformed_name, "port name must not contain whitespace");
    }
  }
}

void Registry::add(const std::string& name, const EndpointTriplet& endpoint) {
  validate_port_name(name);
  std::lock_guard lock(mu_);
  auto [it, inserted] = entries_.try_emplace(name, endpoint);
  if (!inserted && !(it->second == endpoint)) {
    raise(Errc::name_already_registered,
          "'" + name + "' is registered with a different endpoint");
  }
}

std::optional<EndpointTriplet> Registry::find(const std::string& name) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(name);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Registry::remove(const std::string& name) {
  std::lock_guard lock(mu_);
  entries_.erase(name);
}

std::vector<std::pair<std::string, EndpointTriplet>> Registry::snapshot()
    const {
  std::lock_guard lock(mu_);
  return {entries_.begin(), entries_.end()};
}

size_t Registry::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

}  // namespace prioport::ns
