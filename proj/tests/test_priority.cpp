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

#include "common/error.hpp"
#include "qos/priority.hpp"

using namespace prioport;
using namespace prioport::qos;

TEST_CASE("the four classes map to their fixed codepoint, TOS byte and band") {
  struct Row {
    PriorityClass c;
    uint8_t dscp;
    uint8_t tos;
    int band;
  };
  const Row table[] = {
      {PriorityClass::Low, 10, 0x28, 2},
      {PriorityClass::Normal, 0, 0x00, 1},
      {PriorityClass::High, 36, 0x90, 0},
      {PriorityClass::Critical, 44, 0xB0, 0},
  };
  for (const Row& row : table) {
    CAPTURE(static_cast<int>(row.c));
    DscpCodepoint d = class_to_dscp(row.c);
    CHECK(d.value == row.dscp);
    uint8_t tos = dscp_to_tos(d);
    CHECK(tos == row.tos);
    CHECK(tos_to_band(tos) == row.band);
  }
}

TEST_CASE("every codepoint lands in the top six TOS bits") {
  for (uint8_t d = 0; d <= 63; ++d) {
    uint8_t tos = dscp_to_tos({d});
    CHECK(tos == 4 * d);
    CHECK((tos >> 2) == d);
    CHECK((tos & 0b11) == 0);
  }
  CHECK_THROWS_AS(dscp_to_tos({64}), Error);
  try {
    dscp_to_tos({255});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_priority);
  }
}

TEST_CASE("unmapped TOS values classify to the default band") {
  CHECK(tos_to_band(0x37) == 1);
  int mapped = 0;
  for (int tos = 0; tos < 256; ++tos) {
    int band = tos_to_band(static_cast<uint8_t>(tos));
    CHECK(band >= 0);
    CHECK(band <= 2);
    if (tos == 0x90 || tos == 0xB0 || tos == 0x28 || tos == 0x00) ++mapped;
    else CHECK(band == 1);
  }
  CHECK(mapped == 4);
}

TEST_CASE("class and codepoint names render and parse") {
  CHECK(class_name(PriorityClass::High) == "HIGH");
  CHECK(dscp_name(PriorityClass::High) == "AF42");
  CHECK(dscp_name(PriorityClass::Normal) == "DEFAULT");
  CHECK(dscp_name(PriorityClass::Critical) == "VA");
  CHECK(parse_class_name("HIGH") == PriorityClass::High);
  CHECK(parse_class_name("high") == PriorityClass::High);
  CHECK(parse_class_name("Critical") == PriorityClass::Critical);
  CHECK(parse_class_name("URGENT") == std::nullopt);
  for (auto c : {PriorityClass::Low, PriorityClass::Normal, PriorityClass::High,
                 PriorityClass::Critical}) {
    CHECK(parse_class_name(class_name(c)) == c);
  }
}
