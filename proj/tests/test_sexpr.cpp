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

#include <random>

#include "common/error.hpp"
#include "qos/sexpr.hpp"

using namespace prioport;
using namespace prioport::qos;

namespace {

Sexpr parse_all(std::string_view text) {
  size_t pos = 0;
  Sexpr e = parse_sexpr(text, &pos);
  skip_whitespace(text, &pos);
  REQUIRE(pos == text.size());
  return e;
}

Sexpr random_sexpr(std::mt19937& rng, int depth) {
  switch (depth > 0 ? rng() % 4 : rng() % 3) {
    case 0: {
      static const char* symbols[] = {"policy", "SCHED_FIFO", "HIGH", "qos",
                                      "a-b",    "x9",         "+",    "sched"};
      return Sexpr::symbol(symbols[rng() % 8]);
    }
    case 1:
      return Sexpr::integer(static_cast<int64_t>(rng()) - 2147483648LL);
    case 2: {
      std::string s;
      size_t n = rng() % 12;
      for (size_t i = 0; i < n; ++i) {
        static const char chars[] = "ab \"\\()7!";
        s += chars[rng() % (sizeof(chars) - 1)];
      }
      return Sexpr::string(s);
    }
    default: {
      std::vector<Sexpr> items;
      size_t n = rng() % 4;
      for (size_t i = 0; i < n; ++i) items.push_back(random_sexpr(rng, depth - 1));
      return Sexpr::list(std::move(items));
    }
  }
}

}  // namespace

TEST_CASE("atoms and nesting parse into the expected tree") {
  CHECK(parse_all("42") == Sexpr::integer(42));
  CHECK(parse_all("-7") == Sexpr::integer(-7));
  CHECK(parse_all("policy") == Sexpr::symbol("policy"));
  CHECK(parse_all("\"a b\"") == Sexpr::string("a b"));
  CHECK(parse_all("()") == Sexpr::list({}));
  Sexpr expected = Sexpr::list({
      Sexpr::symbol("sched"),
      Sexpr::list({
          Sexpr::list({Sexpr::symbol("policy"), Sexpr::symbol("SCHED_FIFO")}),
          Sexpr::list({Sexpr::symbol("priority"), Sexpr::integer(30)}),
      }),
  });
  CHECK(parse_all("(sched ((policy SCHED_FIFO) (priority 30)))") == expected);
  CHECK(parse_all("(sched\n  ((policy SCHED_FIFO)\n   (priority 30)))") == expected);
}

TEST_CASE("string escapes round-trip") {
  Sexpr s = Sexpr::string("say \"hi\" \\ done");
  CHECK(parse_all(render_sexpr(s)) == s);
  CHECK(parse_all(R"("a\"b\\c")") == Sexpr::string(R"(a"b\c)"));
}

TEST_CASE("malformed input reports the offending position") {
  auto expect_syntax_error = [](std::string_view text) {
    size_t pos = 0;
    try {
      parse_sexpr(text, &pos);
      FAIL("expected a syntax error for: " << std::string(text));
    } catch (const Error& e) {
      CHECK(e.code() == Errc::syntax_error);
      // The byte offset is part of the message.
      CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
  };
  expect_syntax_error("(a (b)");   // unclosed list
  expect_syntax_error(")");        // stray closer
  expect_syntax_error("\"abc");    // unterminated string
  expect_syntax_error("");         // nothing to parse
}

TEST_CASE("rendering is canonical and parse inverts it") {
  CHECK(render_sexpr(parse_all("( a   (b   7) )")) == "(a (b 7))");
  std::mt19937 rng(23);
  for (int i = 0; i < 2000; ++i) {
    Sexpr e = random_sexpr(rng, 3);
    CHECK(parse_all(render_sexpr(e)) == e);
  }
}
