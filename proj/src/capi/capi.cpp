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

#include "prioport.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bench/bench.hpp"
#include "common/error.hpp"
#include "emu/topology.hpp"
#include "name_server/client.hpp"
#include "name_server/server.hpp"
#include "port/admin_client.hpp"
#include "port/port.hpp"
#include "qos/priority.hpp"
#include "qos/sched.hpp"

namespace {

using prioport::Errc;
using prioport::Error;

constexpr const char* kVersion = "1.0.0";

int code_of(Errc c) { return -static_cast<int>(c); }

// Every boundary crossing funnels exceptions into negative reason codes.
template <typename F>
int guarded(F&& f) {
  try {
    f();
    return 0;
  } catch (const Error& e) {
    return code_of(e.code());
  } catch (const std::bad_alloc&) {
    return code_of(Errc::no_memory);
  } catch (...) {
    return code_of(Errc::io_error);
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::string or_empty(const char* s) { return s ? std::string(s) : std::string(); }

void copy_token(char* dst, size_t cap, const std::string& src) {
  const size_t n = src.size() < cap - 1 ? src.size() : cap - 1;
  std::memcpy(dst, src.data(), n);
  dst[n] = '\0';
}

prioport::bench::ReportRow to_report_row(const prioport_bench_row& r) {
  prioport::bench::ReportRow row;
  row.scenario = r.scenario;
  row.qos = r.qos != 0;
  row.load_fraction = r.load_fraction;
  row.probe_carrier = r.probe_carrier;
  row.load_carrier = r.load_carrier;
  row.n = r.n;
  row.mean_ns = r.mean_ns;
  row.stddev_ns = r.stddev_ns;
  row.drops = r.drops;
  return row;
}

}  // namespace

extern "C" {

struct prioport_nameserver {
  prioport::ns::NameServer impl;
};

struct prioport_port {
  prioport::port::Port impl;
};

struct prioport_admin {
  prioport::port::AdminSession impl;
};

const char* prioport_version(void) { return kVersion; }

const char* prioport_strerror(int code) {
  int c = code < 0 ? -code : code;
  if (c > static_cast<int>(Errc::no_memory)) return "unknown-error";
  return prioport::errc_token(static_cast<Errc>(c));
}

void prioport_string_free(char* s) { std::free(s); }

/* ------------------------------------------------------------------ */

int prioport_nameserver_start(const char* host, uint16_t port,
                              prioport_nameserver** out) {
  if (!out) return code_of(Errc::usage);
  *out = nullptr;
  return guarded([&] {
    *out = new prioport_nameserver{
        prioport::ns::NameServer(host ? host : "127.0.0.1", port)};
  });
}

uint16_t prioport_nameserver_port(const prioport_nameserver* s) {
  return s ? s->impl.port() : 0;
}

void prioport_nameserver_stop(prioport_nameserver* s) {
  if (!s) return;
  s->impl.stop();
  delete s;
}

int prioport_lookup(const char* name, const char* nameserver, char** host_out,
                    uint16_t* port_out, char** carrier_out) {
  if (!name) return code_of(Errc::usage);
  return guarded([&] {
    auto client = prioport::ns::NameClient::from_env(or_empty(nameserver));
    const auto ep = client.lookup(name);
    if (host_out) *host_out = dup_string(ep.host);
    if (port_out) *port_out = ep.port;
    if (carrier_out) *carrier_out = dup_string(ep.carrier);
  });
}

/* ------------------------------------------------------------------ */

int prioport_port_open(const char* name, const prioport_port_config* config,
                       prioport_port** out) {
  if (!name || !out) return code_of(Errc::usage);
  *out = nullptr;
  return guarded([&] {
    prioport::port::PortConfig cfg;
    if (config) {
      cfg.nameserver = or_empty(config->nameserver);
      if (config->listen_host) cfg.listen_host = config->listen_host;
      cfg.listen_port = config->listen_port;
      if (config->default_qlen) cfg.default_qlen = config->default_qlen;
      cfg.emu_host = or_empty(config->emu_host);
    }
    *out = new prioport_port{
        prioport::port::Port(std::string(name), std::move(cfg))};
  });
}

void prioport_port_close(prioport_port* p) { delete p; }

uint16_t prioport_port_listen_port(const prioport_port* p) {
  return p ? p->impl.listen_port() : 0;
}

int prioport_port_connect(prioport_port* p, const char* dst,
                          const char* carrier) {
  if (!p || !dst) return code_of(Errc::usage);
  return guarded(
      [&] { p->impl.connect(dst, carrier && *carrier ? carrier : "tcp"); });
}

int prioport_port_disconnect(prioport_port* p, const char* dst) {
  if (!p || !dst) return code_of(Errc::usage);
  return guarded([&] { p->impl.disconnect(dst); });
}

int prioport_port_publish(prioport_port* p, const void* data, size_t len,
                          int want_ack, uint64_t* id_out) {
  if (!p || (!data && len)) return code_of(Errc::usage);
  return guarded([&] {
    prioport::port::PublishOptions opts;
    opts.want_ack = want_ack != 0;
    const uint64_t id = p->impl.publish(
        {static_cast<const uint8_t*>(data), len}, opts);
    if (id_out) *id_out = id;
  });
}

int prioport_port_read(prioport_port* p, int timeout_ms,
                       prioport_message** out) {
  if (!p || !out) return code_of(Errc::usage);
  *out = nullptr;
  return guarded([&] {
    auto r = p->impl.read(timeout_ms);
    if (!r) throw Error(Errc::timeout, "no message ready");
    auto* m = new prioport_message{};
    m->len = r->payload.size();
    m->data = static_cast<uint8_t*>(std::malloc(m->len ? m->len : 1));
    if (!m->data) {
      delete m;
      throw std::bad_alloc();
    }
    std::memcpy(m->data, r->payload.data(), m->len);
    try {
      m->source = dup_string(r->source);
    } catch (...) {
      std::free(m->data);
      delete m;
      throw;
    }
    m->message_id = r->message_id;
    m->timestamp_ns = r->timestamp_ns;
    *out = m;
  });
}

void prioport_message_free(prioport_message* m) {
  if (!m) return;
  std::free(m->data);
  std::free(m->source);
  delete m;
}

int prioport_port_set_sched(prioport_port* p, const char* peer,
                            const char* policy, int priority,
                            char** degraded_out) {
  if (!p || !peer || !policy) return code_of(Errc::usage);
  return guarded([&] {
    const auto parsed = prioport::qos::parse_sched_policy(policy);
    if (!parsed) throw Error(Errc::usage, "unknown scheduling policy");
    const std::string reason = p->impl.set_channel_sched(peer, *parsed, priority);
    if (degraded_out) *degraded_out = dup_string(reason);
  });
}

int prioport_port_set_priority(prioport_port* p, const char* peer,
                               const char* class_name, char** degraded_out) {
  if (!p || !peer || !class_name) return code_of(Errc::usage);
  return guarded([&] {
    const auto parsed = prioport::qos::parse_class_name(class_name);
    if (!parsed) throw Error(Errc::invalid_priority, "unknown priority class");
    const std::string reason = p->impl.set_channel_priority(peer, *parsed);
    if (degraded_out) *degraded_out = dup_string(reason);
  });
}

int prioport_port_set_qlen(prioport_port* p, const char* peer, size_t qlen) {
  if (!p || !peer || !qlen) return code_of(Errc::usage);
  return guarded([&] { p->impl.set_channel_qlen(peer, qlen); });
}

int prioport_port_admin(prioport_port* p, const char* command,
                        char** reply_out) {
  if (!p || !command || !reply_out) return code_of(Errc::usage);
  return guarded(
      [&] { *reply_out = dup_string(p->impl.handle_admin_text(command)); });
}

/* ------------------------------------------------------------------ */

int prioport_admin_open(const char* target, const char* nameserver,
                        prioport_admin** out) {
  if (!target || !out) return code_of(Errc::usage);
  *out = nullptr;
  return guarded([&] {
    *out = new prioport_admin{
        prioport::port::AdminSession::open(target, or_empty(nameserver))};
  });
}

int prioport_admin_request(prioport_admin* a, const char* command,
                           int timeout_ms, char** reply_out) {
  if (!a || !command || !reply_out) return code_of(Errc::usage);
  return guarded([&] {
    *reply_out =
        dup_string(a->impl.request(command, timeout_ms > 0 ? timeout_ms : 5000));
  });
}

void prioport_admin_close(prioport_admin* a) { delete a; }

/* ------------------------------------------------------------------ */

int prioport_bench_run(const prioport_bench_config* config,
                       prioport_bench_row* row_out) {
  if (!config || !row_out) return code_of(Errc::usage);
  return guarded([&] {
    prioport::bench::ScenarioConfig c;
    if (config->scenario) c.scenario = config->scenario;
    c.qos = config->qos != 0;
    c.load_fraction = config->load_fraction;
    if (config->probe_carrier) c.probe_carrier = config->probe_carrier;
    if (config->load_carrier) c.load_carrier = config->load_carrier;
    c.emulate = config->emulate != 0;
    if (config->seed) c.seed = config->seed;
    c.probe_size_bytes = config->probe_size_bytes;
    if (config->probe_rate_hz > 0) c.probe_rate_hz = config->probe_rate_hz;
    if (config->probe_count) c.probe_count = config->probe_count;
    if (config->probe_warmup) c.probe_warmup = config->probe_warmup;
    if (config->load_message_bytes)
      c.load_message_bytes = config->load_message_bytes;
    if (config->link_bytes_per_sec)
      c.link_bytes_per_sec = config->link_bytes_per_sec;
    c.topology_file = or_empty(config->topology_file);
    c.nameserver = or_empty(config->nameserver);
    const auto row = prioport::bench::run_scenario(c);
    copy_token(row_out->scenario, sizeof row_out->scenario, row.scenario);
    row_out->qos = row.qos ? 1 : 0;
    row_out->load_fraction = row.load_fraction;
    copy_token(row_out->probe_carrier, sizeof row_out->probe_carrier,
               row.probe_carrier);
    copy_token(row_out->load_carrier, sizeof row_out->load_carrier,
               row.load_carrier);
    row_out->n = row.n;
    row_out->mean_ns = row.mean_ns;
    row_out->stddev_ns = row.stddev_ns;
    row_out->drops = row.drops;
  });
}

const char* prioport_bench_csv_header(void) {
  static const std::string header = prioport::bench::csv_header();
  return header.c_str();
}

int prioport_bench_row_csv(const prioport_bench_row* row, char** line_out) {
  if (!row || !line_out) return code_of(Errc::usage);
  return guarded([&] {
    *line_out = dup_string(prioport::bench::csv_row(to_report_row(*row)));
  });
}

int prioport_bench_plot(const prioport_bench_row* rows, size_t count,
                        const char* title, char** svg_out) {
  if ((!rows && count) || !svg_out) return code_of(Errc::usage);
  return guarded([&] {
    std::vector<prioport::bench::ReportRow> converted;
    converted.reserve(count);
    for (size_t i = 0; i < count; ++i) converted.push_back(to_report_row(rows[i]));
    *svg_out = dup_string(prioport::bench::render_svg_plot(
        converted, title ? title : "round-trip latency"));
  });
}

/* ------------------------------------------------------------------ */

int prioport_topology_check(const char* path, char** summary_out) {
  if (!path || !summary_out) return code_of(Errc::usage);
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, std::string("cannot open ") + path);
    std::ostringstream text;
    text << in.rdbuf();
    const auto topo = prioport::emu::Topology::parse(text.str());
    std::ostringstream out;
    out << "nodes " << topo.node_count() << ", wires " << topo.wires().size()
        << "\n";
    for (uint32_t id = 0; id < topo.node_count(); ++id) {
      out << (topo.node_kind(id) == prioport::emu::NodeKind::Switch ? "switch "
                                                                    : "host ")
          << topo.node_name(id) << "\n";
    }
    for (const auto& w : topo.wires()) {
      out << "wire " << topo.node_name(w.from) << " -> " << topo.node_name(w.to)
          << " rate " << w.rate_bytes_per_sec << " B/s delay "
          << w.propagation_delay_ns << " ns\n";
    }
    *summary_out = dup_string(out.str());
  });
}

}  // extern "C"
