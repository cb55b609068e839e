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

// Operator entry points. Every subcommand is a thin client of the shared
// C interface; nothing here talks to the library internals directly.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "prioport.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted.store(true); }

int fail(const std::string& subcommand, const std::string& message,
         int status = kExitFailure) {
  std::cerr << "prioport " << subcommand << ": " << message << "\n";
  return status;
}

int fail_code(const std::string& subcommand, int code) {
  return fail(subcommand, prioport_strerror(code));
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  prioport_string_free(s);
  return out;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

bool known_carrier(const std::string& c) {
  return c == "tcp" || c == "udp" || c == "emu" || c == "emu:tcp" ||
         c == "emu:udp";
}

struct AdminHandle {
  prioport_admin* session = nullptr;
  ~AdminHandle() { prioport_admin_close(session); }
};

// ------------------------------------------------------------------
// nameserver: run the registry daemon until interrupted.

int run_nameserver(const std::string& host, uint16_t port) {
  prioport_nameserver* server = nullptr;
  if (int rc = prioport_nameserver_start(host.c_str(), port, &server); rc != 0)
    return fail_code("nameserver", rc);
  std::cout << "name server listening on " << host << ":"
            << prioport_nameserver_port(server) << std::endl;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_interrupted.load())
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  prioport_nameserver_stop(server);
  return 0;
}

// ------------------------------------------------------------------
// connect / disconnect: drive a running port through its admin session.

int run_connect(const std::string& src, const std::string& dst,
                const std::string& carrier, const std::string& nameserver) {
  if (!known_carrier(carrier))
    return fail("connect", "unknown carrier \"" + carrier + "\"", kExitUsage);

  char* host = nullptr;
  uint16_t port = 0;
  const char* ns = nameserver.c_str();
  if (int rc = prioport_lookup(src.c_str(), ns, &host, &port, nullptr); rc != 0)
    return fail_code("connect", rc);
  const std::string src_ep = take_string(host) + ":" + std::to_string(port);
  if (int rc = prioport_lookup(dst.c_str(), ns, &host, &port, nullptr); rc != 0)
    return fail_code("connect", rc);
  const std::string dst_ep = take_string(host) + ":" + std::to_string(port);

  AdminHandle admin;
  if (int rc = prioport_admin_open(src.c_str(), ns, &admin.session); rc != 0)
    return fail_code("connect", rc);
  char* reply = nullptr;
  const std::string command = "connect " + dst + " " + carrier;
  if (int rc = prioport_admin_request(admin.session, command.c_str(), 0, &reply);
      rc != 0)
    return fail_code("connect", rc);
  const std::string text = take_string(reply);
  if (text.rfind("err", 0) == 0) return fail("connect", text);
  std::cout << src << " " << src_ep << " -> " << dst << " " << dst_ep
            << " carrier " << carrier << "\n";
  return 0;
}

int run_disconnect(const std::string& src, const std::string& dst,
                   const std::string& nameserver) {
  AdminHandle admin;
  if (int rc =
          prioport_admin_open(src.c_str(), nameserver.c_str(), &admin.session);
      rc != 0)
    return fail_code("disconnect", rc);
  char* reply = nullptr;
  const std::string command = "disconnect " + dst;
  if (int rc = prioport_admin_request(admin.session, command.c_str(), 0, &reply);
      rc != 0)
    return fail_code("disconnect", rc);
  const std::string text = take_string(reply);
  if (text.rfind("err", 0) == 0) return fail("disconnect", text);
  std::cout << text << "\n";
  return 0;
}

// ------------------------------------------------------------------
// admin: request/reply session. Script lines come from the arguments or,
// when none are given, from standard input; the exit status follows the
// last reply.

int run_admin(const std::string& target, const std::vector<std::string>& script,
              const std::string& nameserver, int timeout_ms) {
  AdminHandle admin;
  if (int rc = prioport_admin_open(target.c_str(), nameserver.c_str(),
                                   &admin.session);
      rc != 0)
    return fail_code("admin", rc);

  bool last_ok = true;
  const auto execute = [&](const std::string& line) -> bool {
    char* reply = nullptr;
    if (int rc = prioport_admin_request(admin.session, line.c_str(), timeout_ms,
                                        &reply);
        rc != 0) {
      fail("admin", prioport_strerror(rc));
      last_ok = false;
      return false;
    }
    const std::string text = take_string(reply);
    std::cout << text << std::endl;
    last_ok = text.rfind("err", 0) != 0;
    return true;
  };

  if (!script.empty()) {
    for (const auto& line : script)
      if (!execute(line)) return kExitFailure;
  } else {
    std::string line;
    while (std::getline(std::cin, line)) {
      if (line.empty()) continue;
      if (!execute(line)) return kExitFailure;
    }
  }
  return last_ok ? 0 : kExitFailure;
}

// ------------------------------------------------------------------
// bench: cross-product of the requested configurations, CSV on standard
// output (flushed row by row), optional SVG plot.

struct BenchFlags {
  std::string scenarios = "nic";
  std::string loads = "0.7";
  std::string qos = "on,off";
  std::string probe_carriers = "tcp";
  std::string load_carriers = "tcp";
  bool emulate = false;
  std::string topology;
  std::string plot_file;
  std::string nameserver;
  uint64_t seed = 1;
  size_t probe_size = 0;
  double probe_rate = 0;
  size_t probe_count = 0;
  size_t probe_warmup = 0;
  size_t load_bytes = 0;
  uint64_t link_rate = 0;
};

int run_bench(const BenchFlags& flags) {
  const auto scenarios = split_csv(flags.scenarios);
  const auto qos_modes = split_csv(flags.qos);
  const auto probe_carriers = split_csv(flags.probe_carriers);
  const auto load_carriers = split_csv(flags.load_carriers);
  std::vector<double> loads;
  for (const auto& text : split_csv(flags.loads)) {
    char* end = nullptr;
    const double f = std::strtod(text.c_str(), &end);
    if (!end || *end != '\0')
      return fail("bench", "bad load fraction \"" + text + "\"", kExitUsage);
    if (f < 0.0 || f > 1.0)
      return fail("bench", "load fraction out of range [0, 1]: " + text,
                  kExitUsage);
    loads.push_back(f);
  }
  if (scenarios.empty() || qos_modes.empty() || loads.empty() ||
      probe_carriers.empty() || load_carriers.empty())
    return fail("bench", "empty configuration set", kExitUsage);
  std::vector<int> qos_values;
  for (const auto& mode : qos_modes) {
    if (mode == "on")
      qos_values.push_back(1);
    else if (mode == "off")
      qos_values.push_back(0);
    else
      return fail("bench", "qos must be on or off, got \"" + mode + "\"",
                  kExitUsage);
  }

  std::vector<prioport_bench_row> rows;
  std::cout << prioport_bench_csv_header() << std::endl;
  for (const auto& scenario : scenarios)
    for (const int qos : qos_values)
      for (const double load : loads)
        for (const auto& probe_carrier : probe_carriers)
          for (const auto& load_carrier : load_carriers) {
            prioport_bench_config config{};
            config.scenario = scenario.c_str();
            config.qos = qos;
            config.load_fraction = load;
            config.probe_carrier = probe_carrier.c_str();
            config.load_carrier = load_carrier.c_str();
            config.emulate = flags.emulate ? 1 : 0;
            config.seed = flags.seed;
            config.probe_size_bytes = flags.probe_size;
            config.probe_rate_hz = flags.probe_rate;
            config.probe_count = flags.probe_count;
            config.probe_warmup = flags.probe_warmup;
            config.load_message_bytes = flags.load_bytes;
            config.link_bytes_per_sec = flags.link_rate;
            config.topology_file =
                flags.topology.empty() ? nullptr : flags.topology.c_str();
            config.nameserver =
                flags.nameserver.empty() ? nullptr : flags.nameserver.c_str();
            prioport_bench_row row{};
            if (int rc = prioport_bench_run(&config, &row); rc != 0)
              return fail_code("bench", rc);
            char* line = nullptr;
            if (int rc = prioport_bench_row_csv(&row, &line); rc != 0)
              return fail_code("bench", rc);
            std::cout << take_string(line) << std::endl;
            rows.push_back(row);
          }

  if (!flags.plot_file.empty()) {
    char* svg = nullptr;
    if (int rc = prioport_bench_plot(rows.data(), rows.size(),
                                     "round-trip latency under load", &svg);
        rc != 0)
      return fail_code("bench", rc);
    std::ofstream out(flags.plot_file, std::ios::binary);
    out << take_string(svg);
    if (!out) return fail("bench", "cannot write " + flags.plot_file);
    std::cerr << "plot written to " << flags.plot_file << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------
// emu: static topology inspection.

int run_emu(const std::string& path) {
  char* summary = nullptr;
  if (int rc = prioport_topology_check(path.c_str(), &summary); rc != 0)
    return fail_code("emu", rc);
  std::cout << take_string(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"peer-to-peer ports with per-channel priorities"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(prioport_version()));

  std::string ns_host = "127.0.0.1";
  uint16_t ns_port = 10000;
  auto* ns_cmd = app.add_subcommand("nameserver", "run the name server");
  ns_cmd->add_option("--host", ns_host, "bind address");
  ns_cmd->add_option("--port", ns_port, "bind port (0 = ephemeral)");

  std::string src, dst, carrier = "tcp", nameserver;
  auto* connect_cmd =
      app.add_subcommand("connect", "connect one port to another");
  connect_cmd->add_option("src", src, "publishing port name")->required();
  connect_cmd->add_option("dst", dst, "subscribing port name")->required();
  connect_cmd->add_option("--carrier", carrier,
                          "tcp, udp, emu, emu:tcp or emu:udp");
  connect_cmd->add_option("--nameserver", nameserver, "host:port override");

  auto* disconnect_cmd =
      app.add_subcommand("disconnect", "tear down a connection");
  disconnect_cmd->add_option("src", src, "publishing port name")->required();
  disconnect_cmd->add_option("dst", dst, "subscribing port name")->required();
  disconnect_cmd->add_option("--nameserver", nameserver, "host:port override");

  std::string admin_target;
  std::vector<std::string> admin_script;
  int admin_timeout_ms = 5000;
  auto* admin_cmd =
      app.add_subcommand("admin", "administrative session against a port");
  admin_cmd->add_option("target", admin_target, "port name")->required();
  admin_cmd->add_option("command", admin_script,
                        "commands to run (none = read standard input)");
  admin_cmd->add_option("--timeout", admin_timeout_ms, "reply timeout in ms");
  admin_cmd->add_option("--nameserver", nameserver, "host:port override");

  BenchFlags bench;
  auto* bench_cmd =
      app.add_subcommand("bench", "round-trip latency benchmark, CSV output");
  bench_cmd->add_option("--scenario", bench.scenarios, "nic,switch");
  bench_cmd->add_option("--load", bench.loads, "load fractions, e.g. 0.2,0.7");
  bench_cmd->add_option("--qos", bench.qos, "on,off");
  bench_cmd->add_option("--probe-carrier", bench.probe_carriers, "tcp,udp");
  bench_cmd->add_option("--load-carrier", bench.load_carriers, "tcp,udp");
  bench_cmd->add_flag("--emulate", bench.emulate,
                      "deterministic virtual-time mode");
  bench_cmd->add_option("--topology", bench.topology,
                        "emulated-topology file override");
  bench_cmd->add_option("--plot", bench.plot_file, "write an SVG plot here");
  bench_cmd->add_option("--nameserver", bench.nameserver,
                        "host:port override (real mode)");
  bench_cmd->add_option("--seed", bench.seed, "schedule seed");
  bench_cmd->add_option("--probe-size", bench.probe_size,
                        "probe payload bytes (0 = scenario default)");
  bench_cmd->add_option("--probe-rate", bench.probe_rate, "probes per second");
  bench_cmd->add_option("--probe-count", bench.probe_count,
                        "measured probes per run");
  bench_cmd->add_option("--probe-warmup", bench.probe_warmup,
                        "discarded leading probes");
  bench_cmd->add_option("--load-bytes", bench.load_bytes,
                        "load message payload bytes");
  bench_cmd->add_option("--link-rate", bench.link_rate,
                        "emulated link rate, bytes per second");

  std::string topology_path;
  auto* emu_cmd = app.add_subcommand("emu", "inspect a topology file");
  emu_cmd->add_option("file", topology_path, "topology file")->required();

  CLI11_PARSE(app, argc, argv);

  if (ns_cmd->parsed()) return run_nameserver(ns_host, ns_port);
  if (connect_cmd->parsed()) return run_connect(src, dst, carrier, nameserver);
  if (disconnect_cmd->parsed()) return run_disconnect(src, dst, nameserver);
  if (admin_cmd->parsed())
    return run_admin(admin_target, admin_script, nameserver, admin_timeout_ms);
  if (bench_cmd->parsed()) return run_bench(bench);
  if (emu_cmd->parsed()) return run_emu(topology_path);
  return kExitUsage;
}
