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
#include <optional>
#include <string>
#include <string_view>

namespace prioport::qos {

// The four predefined packet priority classes. Each maps to exactly one DSCP
// codepoint and one queue band:
//
//   Low      -> AF11 (10)    -> band 2
//   Normal   -> Default (0)  -> band 1
//   High     -> AF42 (36)    -> band 0
//   Critical -> VA (44)      -> band 0
//
// Codepoint numerals follow the DiffServ registry (AF11 = 001010b,
// AF42 = 100100b, VA = 101100b).
enum class PriorityClass : uint8_t { Low, Normal, High, Critical };

// A 6-bit DiffServ codepoint. Occupies the six most significant bits of the
// TOS byte: tos = value * 4.
struct DscpCodepoint {
  uint8_t value = 0;  // 0..63

  bool operator==(const DscpCodepoint&) const = default;
};

inline constexpr uint8_t kDscpDefault = 0;
inline constexpr uint8_t kDscpAf11 = 10;
inline constexpr uint8_t kDscpAf42 = 36;
inline constexpr uint8_t kDscpVoiceAdmit = 44;

DscpCodepoint class_to_dscp(PriorityClass c);

// Throws Error{invalid_priority} ("out-of-range") when d.value > 63.
uint8_t dscp_to_tos(DscpCodepoint d);

// Three-band classifier used by the emulated queue discipline. Unmapped TOS
// values fall to the default band 1.
int tos_to_band(uint8_t tos);

// Class names as they appear in admin commands: LOW, NORMAL, HIGH, CRITICAL.
std::string_view class_name(PriorityClass c);

// DSCP mnemonics as they appear in admin replies: AF11, DEFAULT, AF42, VA.
std::string_view dscp_name(PriorityClass c);

// Case-insensitive parse of a class name; nullopt for anything else.
std::optional<PriorityClass> parse_class_name(std::string_view token);

}  // namespace prioport::qos
