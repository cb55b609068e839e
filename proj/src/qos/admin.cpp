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

#include "qos/admin.hpp"

#include <cctype>

namespace prioport::qos {

namespace {

// Reads the next bare atom (no parens/quotes) or fails.
std::string expect_word(std::string_view text, size_t* pos,
                        const char* what) {
  skip_whitespace(text, pos);
  const size_t start = *pos;
  while (*pos < text.size()) {
    const char c = text[*pos];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
        c == '"') {
      break;
    }
    ++*pos;
  }
  if (*pos == start) {
    raise(Errc::syntax_error, std::string("syntax error at position ") +
                                  std::to_string(start) + ": expected " +
                                  what);
  }
  return std::string(text.substr(start, *pos - start));
}

void expect_end(std::string_view text, size_t pos) {
  skip_whitespace(text, &pos);
  if (pos != text.size()) {
    raise(Errc::syntax_error, "syntax error at position " +
                                  std::to_string(pos) +
                                  ": trailing input after command");
  }
}

bool known_property_key(std::string_view key) {
  return key == "sched" || key == "qos" || key == "qlen";
}

// Looks up (key value) inside a list of pairs; nullptr when absent.
const Sexpr* find_pair_value(const Sexpr& pairs, std::string_view key) {
  if (pairs.kind != Sexpr::Kind::List) return nullptr;
  for (const Sexpr& item : pairs.items) {
    if (item.kind == Sexpr::Kind::List && item.items.size() == 2 &&
        item.items[0].kind == Sexpr::Kind::Symbol &&
        item.items[0].text == key) {
      return &item.items[1];
    }
  }
  return nullptr;
}

[[noreturn]] void shape_error(const char* what) {
  raise(Errc::syntax_error, std::string("malformed property: ") + what);
}

}  // namespace

AdminRequest parse_admin_command(std::string_view text) {
  size_t pos = 0;
  const std::string head = expect_word(text, &pos, "command verb");
  if (head != "prop") {
    raise(Errc::unknown_verb, "unknown verb '" + head + "'");
  }
  const std::string action = expect_word(text, &pos, "set|get");
  if (action != "set" && action != "get") {
    raise(Errc::unknown_verb, "unknown verb 'prop " + action + "'");
  }
  const std::string peer = expect_word(text, &pos, "target port name");
  if (peer.empty() || peer[0] != '/') {
    raise(Errc::syntax_error,
          "syntax error: target port name must begin with '/'");
  }

  AdminRequest req;
  req.target_peer = peer;
  if (action == "get") {
    req.verb = AdminVerb::PropGet;
    expect_end(text, pos);
    return req;
  }

  req.verb = AdminVerb::PropSet;
  req.property = parse_sexpr(text, &pos);
  expect_end(text, pos);
  if (req.property.kind != Sexpr::Kind::List || req.property.items.empty() ||
      req.property.items[0].kind != Sexpr::Kind::Symbol) {
    raise(Errc::syntax_error, "property must be a (key ...) list");
  }
  if (!known_property_key(req.property.items[0].text)) {
    raise(Errc::unknown_property,
          "unknown property '" + req.property.items[0].text + "'");
  }
  return req;
}

std::string render_admin_request(const AdminRequest& r) {
  if (r.verb == AdminVerb::PropGet) {
    return "prop get " + r.target_peer;
  }
  return "prop set " + r.target_peer + " " + render_sexpr(r.property);
}

ParsedSched sched_from_property(const Sexpr& property) {
  if (property.items.size() != 2) shape_error("expected (sched (...))");
  const Sexpr& pairs = property.items[1];
  const Sexpr* policy = find_pair_value(pairs, "policy");
  if (policy == nullptr || policy->kind != Sexpr::Kind::Symbol) {
    shape_error("sched requires (policy <name>)");
  }
  const auto parsed = parse_sched_policy(policy->text);
  if (!parsed) shape_error("unknown scheduling policy");

  ParsedSched out;
  out.policy = *parsed;
  if (const Sexpr* prio = find_pair_value(pairs, "priority")) {
    if (prio->kind != Sexpr::Kind::Int) shape_error("priority must be integer");
    if (prio->num < -(1 << 30) || prio->num > (1 << 30)) {
      shape_error("priority out of range");
    }
    out.priority = static_cast<int>(prio->num);
  }
  return out;
}

PriorityClass qos_from_property(const Sexpr& property) {
  if (property.items.size() != 2) shape_error("expected (qos (...))");
  const Sexpr* prio = find_pair_value(property.items[1], "priority");
  if (prio == nullptr || prio->kind != Sexpr::Kind::Symbol) {
    shape_error("qos requires (priority <class>)");
  }
  const auto cls = parse_class_name(prio->text);
  if (!cls) shape_error("unknown priority class");
  return *cls;
}

size_t qlen_from_property(const Sexpr& property) {
  if (property.items.size() != 2 ||
      property.items[1].kind != Sexpr::Kind::Int) {
    shape_error("expected (qlen <capacity>)");
  }
  if (property.items[1].num < 1 || property.items[1].num > (1 << 24)) {
    shape_error("qlen out of range");
  }
  return static_cast<size_t>(property.items[1].num);
}

std::string render_set_reply(const std::string& degraded_reason) {
  if (degraded_reason.empty()) return "ok";
  Sexpr note = Sexpr::list(
      {Sexpr::symbol("degraded"), Sexpr::string(degraded_reason)});
  return "ok " + render_sexpr(note);
}

std::string render_err_reply(Errc code) {
  return std::string("err ") + errc_token(code);
}

std::string render_get_reply(const ChannelReport& report) {
  using K = Sexpr;
  std::vector<Sexpr> sched_pairs = {
      K::list({K::symbol("policy"),
               K::symbol(std::string(sched_policy_name(report.sched.policy)))}),
      K::list({K::symbol("priority"), K::integer(report.sched.priority)}),
      K::list({K::symbol("applied"), K::integer(report.sched.applied ? 1 : 0)}),
  };
  if (!report.sched.applied) {
    sched_pairs.push_back(K::list(
        {K::symbol("degraded"), K::string(report.sched.degraded_reason)}));
  }
  Sexpr sched =
      K::list({K::symbol("sched"), K::list(std::move(sched_pairs))});

  Sexpr qos = K::list(
      {K::symbol("qos"),
       K::list({
           K::list({K::symbol("priority"),
                    K::symbol(std::string(class_name(report.packet_priority)))}),
           K::list({K::symbol("dscp"),
                    K::symbol(std::string(dscp_name(report.packet_priority)))}),
       })});

  auto counter = [](const char* name, uint64_t v) {
    return Sexpr::list(
        {Sexpr::symbol(name), Sexpr::integer(static_cast<int64_t>(v))});
  };
  Sexpr counters = K::list({K::symbol("counters"),
                            K::list({
                                counter("enqueued", report.enqueued),
                                counter("sent", report.sent),
                                counter("received", report.received),
                                counter("dropped", report.dropped),
                                counter("acks", report.acks),
                                counter("queued", report.queued),
                            })});
  Sexpr status =
      K::list({K::symbol("status"), K::symbol(report.status)});

  return "ok " + render_sexpr(sched) + " " + render_sexpr(qos) + " " +
         render_sexpr(counters) + " " + render_sexpr(status);
}

}  // namespace prioport::qos
