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

#include "qos/sexpr.hpp"

#include <cctype>
#include <charconv>

#include "common/error.hpp"

namespace prioport::qos {

Sexpr Sexpr::symbol(std::string s) {
  Sexpr e;
  e.kind = Kind::Symbol;
  e.text = std::move(s);
  return e;
}

Sexpr Sexpr::integer(int64_t v) {
  Sexpr e;
  e.kind = Kind::Int;
  e.num = v;
  return e;
}

Sexpr Sexpr::string(std::string s) {
  Sexpr e;
  e.kind = Kind::String;
  e.text = std::move(s);
  return e;
}

Sexpr Sexpr::list(std::vector<Sexpr> items) {
  Sexpr e;
  e.kind = Kind::List;
  e.items = std::move(items);
  return e;
}

void skip_whitespace(std::string_view input, size_t* pos) {
  while (*pos < input.size() &&
         std::isspace(static_cast<unsigned char>(input[*pos]))) {
    ++*pos;
  }
}

namespace {

[[noreturn]] void syntax_error(size_t pos, const std::string& what) {
  raise(Errc::syntax_error,
        "syntax error at position " + std::to_string(pos) + ": " + what);
}

bool atom_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' &&
         c != ')' && c != '"';
}

Sexpr parse_quoted(std::string_view input, size_t* pos) {
  const size_t start = *pos;
  ++*pos;  // opening quote
  std::string out;
  while (*pos < input.size()) {
    const char c = input[*pos];
    if (c == '"') {
      ++*pos;
      return Sexpr::string(std::move(out));
    }
    if (c == '\\') {
      if (*pos + 1 >= input.size()) syntax_error(*pos, "dangling escape");
      const char esc = input[*pos + 1];
      if (esc != '"' && esc != '\\') syntax_error(*pos, "unknown escape");
      out.push_back(esc);
      *pos += 2;
      continue;
    }
    out.push_back(c);
    ++*pos;
  }
  syntax_error(start, "unterminated string");
}

Sexpr parse_atom(std::string_view input, size_t* pos) {
  const size_t start = *pos;
  while (*pos < input.size() && atom_char(input[*pos])) ++*pos;
  std::string_view tok = input.substr(start, *pos - start);
  int64_t value = 0;
  const auto [end, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec == std::errc() && end == tok.data() + tok.size()) {
    return Sexpr::integer(value);
  }
  return Sexpr::symbol(std::string(tok));
}

}  // namespace

Sexpr parse_sexpr(std::string_view input, size_t* pos) {
  skip_whitespace(input, pos);
  if (*pos >= input.size()) syntax_error(*pos, "expected expression");
  const char c = input[*pos];
  if (c == ')') syntax_error(*pos, "unexpected ')'");
  if (c == '"') return parse_quoted(input, pos);
  if (c != '(') return parse_atom(input, pos);

  ++*pos;  // '('
  std::vector<Sexpr> items;
  for (;;) {
    skip_whitespace(input, pos);
    if (*pos >= input.size()) syntax_error(*pos, "unterminated list");
    if (input[*pos] == ')') {
      ++*pos;
      return Sexpr::list(std::move(items));
    }
    items.push_back(parse_sexpr(input, pos));
  }
}

std::string render_sexpr(const Sexpr& e) {
  switch (e.kind) {
    case Sexpr::Kind::Symbol:
      return e.text;
    case Sexpr::Kind::Int:
      return std::to_string(e.num);
    case Sexpr::Kind::String: {
      std::string out = "\"";
      for (char c : e.text) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
      }
      out.push_back('"');
      return out;
    }
    case Sexpr::Kind::List: {
      std::string out = "(";
      for (size_t i = 0; i < e.items.size(); ++i) {
        if (i) out.push_back(' ');
        out += render_sexpr(e.items[i]);
      }
      out.push_back(')');
      return out;
    }
  }
  return {};
}

}  // namespace prioport::qos
