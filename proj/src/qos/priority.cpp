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

#include "qos/priority.hpp"

#include <algorithm>
#include <cctype>

#include "common/error.hpp"

namespace prioport::qos {

DscpCodepoint class_to_dscp(PriorityClass c) {
  switch (c) {
    case PriorityClass::Low: return {kDscpAf11};
    case PriorityClass::Normal: return {kDscpDefault};
    case PriorityClass::High: return {kDscpAf42};
    case PriorityClass::Critical: return {kDscpVoiceAdmit};
  }
  return {kDscpDefault};
}

uint8_t dscp_to_tos(DscpCodepoint d) {
  if (d.value > 63) {
    raise(Errc::invalid_priority, "dscp codepoint out of range");
  }
  return static_cast<uint8_t>(d.value << 2);
}

int tos_to_band(uint8_t tos) {
  switch (tos) {
    case 0x90:  // AF42
    case 0xB0:  // VA
      return 0;
    case 0x28:  // AF11
      return 2;
    default:
      return 1;
  }
}

std::string_view class_name(PriorityClass c) {
  switch (c) {
    case PriorityClass::Low: return "LOW";
    case PriorityClass::Normal: return "NORMAL";
    case PriorityClass::High: return "HIGH";
    case PriorityClass::Critical: return "CRITICAL";
  }
  return "NORMAL";
}

std::string_view dscp_name(PriorityClass c) {
  switch (c) {
    case PriorityClass::Low: return "AF11";
    case PriorityClass::Normal: return "DEFAULT";
    case PriorityClass::High: return "AF42";
    case PriorityClass::Critical: return "VA";
  }
  return "DEFAULT";
}

std::optional<PriorityClass> parse_class_name(std::string_view token) {
  std::string up(token);
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char ch) { return std::toupper(ch); });
  if (up == "LOW") return PriorityClass::Low;
  if (up == "NORMAL") return PriorityClass::Normal;
  if (up == "HIGH") return PriorityClass::High;
  if (up == "CRITICAL") return PriorityClass::Critical;
  return std::nullopt;
}

}  // namespace prioport::qos
