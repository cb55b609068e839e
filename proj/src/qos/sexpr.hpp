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
#include <string>
#include <string_view>
#include <vector>

namespace prioport::qos {

// Minimal s-expression values for the admin property syntax: symbols,
// integers, quoted strings and lists. Whitespace-insensitive.
struct Sexpr {
  enum class Kind : uint8_t { Symbol, Int, String, List };

  Kind kind = Kind::List;
  std::string text;          // Symbol / String payload
  int64_t num = 0;           // Int payload
  std::vector<Sexpr> items;  // List payload

  bool operator==(const Sexpr&) const = default;

  static Sexpr symbol(std::string s);
  static Sexpr integer(int64_t v);
  static Sexpr string(std::string s);
  static Sexpr list(std::vector<Sexpr> items);
};

// Parses one s-expression starting at *pos, advancing *pos past it. Throws
// Error{syntax_error} with the byte position of the offending character.
Sexpr parse_sexpr(std::string_view input, size_t* pos);

// Canonical textual form: single spaces between list items, integers in
// decimal, strings double-quoted with \" and \\ escapes.
std::string render_sexpr(const Sexpr& e);

void skip_whitespace(std::string_view input, size_t* pos);

}  // namespace prioport::qos
