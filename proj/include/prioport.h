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

/*
 * C interface of the prioport middleware: named ports exchanging messages
 * over dedicated prioritized channels, a name server, administrative
 * sessions, and the benchmark driver.
 *
 * Conventions:
 *   - Functions returning int yield 0 on success and a negative reason code
 *     on failure; prioport_strerror() maps any return to a stable token.
 *   - Output strings marked "caller frees" are released with
 *     prioport_string_free(); messages with prioport_message_free().
 *   - All handles are opaque and thread-safe to the same degree as the
 *     underlying objects; each *_close/_stop call also frees the handle.
 *   - Emulated carriers ("emu", "emu:tcp", "emu:udp") run on the
 *     process-wide virtual network when opened through this interface.
 */

#ifndef PRIOPORT_H
#define PRIOPORT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

const char* prioport_version(void);

/* Token for a return code, e.g. "no-such-channel"; never NULL. */
const char* prioport_strerror(int code);

void prioport_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Name server                                                         */

typedef struct prioport_nameserver prioport_nameserver;

/* Binds immediately; port 0 picks an ephemeral one. */
int prioport_nameserver_start(const char* host, uint16_t port,
                              prioport_nameserver** out);
uint16_t prioport_nameserver_port(const prioport_nameserver* s);
/* Stops and frees. NULL is a no-op. */
void prioport_nameserver_stop(prioport_nameserver* s);

/* Resolves a registered name. nameserver may be NULL or "" to use the
 * PRIOPORT_NAMESERVER environment variable, then the default
 * 127.0.0.1:10000. host_out and carrier_out are caller-freed. */
int prioport_lookup(const char* name, const char* nameserver, char** host_out,
                    uint16_t* port_out, char** carrier_out);

/* ------------------------------------------------------------------ */
/* Ports and channels                                                  */

typedef struct prioport_port prioport_port;

typedef struct {
  const char* nameserver;  /* NULL/"" = environment, then default */
  const char* listen_host; /* NULL = "127.0.0.1" */
  uint16_t listen_port;    /* 0 = ephemeral */
  size_t default_qlen;     /* 0 = default (64) */
  const char* emu_host;    /* virtual host name; NULL = the port name */
} prioport_port_config;

/* Opens and registers a port. config may be NULL for all defaults. */
int prioport_port_open(const char* name, const prioport_port_config* config,
                       prioport_port** out);
/* Unregisters, closes every channel, frees. NULL is a no-op. */
void prioport_port_close(prioport_port* p);
uint16_t prioport_port_listen_port(const prioport_port* p);

/* carrier: "tcp" (default when NULL), "udp", "emu", "emu:tcp", "emu:udp". */
int prioport_port_connect(prioport_port* p, const char* dst,
                          const char* carrier);
int prioport_port_disconnect(prioport_port* p, const char* dst);

/* Enqueues onto every active output channel without blocking on the
 * network. id_out (optional) receives the per-port message id. */
int prioport_port_publish(prioport_port* p, const void* data, size_t len,
                          int want_ack, uint64_t* id_out);

typedef struct {
  uint8_t* data;
  size_t len;
  char* source; /* publishing port's name */
  uint64_t message_id;
  uint64_t timestamp_ns;
} prioport_message;

/* Next message across input channels (round-robin, FIFO within each).
 * timeout_ms < 0 waits indefinitely, 0 polls, > 0 waits that long.
 * An empty poll or an expired wait returns -timeout. */
int prioport_port_read(prioport_port* p, int timeout_ms,
                       prioport_message** out);
void prioport_message_free(prioport_message* m);

/* policy: "SCHED_OTHER", "SCHED_FIFO", "SCHED_RR". A scheduling or marking
 * refusal by the OS degrades the channel instead of failing; when
 * degraded_out is non-NULL it receives the reason ("" when fully applied),
 * caller-freed. */
int prioport_port_set_sched(prioport_port* p, const char* peer,
                            const char* policy, int priority,
                            char** degraded_out);
/* priority class: "LOW", "NORMAL", "HIGH", "CRITICAL". */
int prioport_port_set_priority(prioport_port* p, const char* peer,
                               const char* class_name, char** degraded_out);
int prioport_port_set_qlen(prioport_port* p, const char* peer, size_t qlen);

/* Runs one admin command against the local port (same grammar as remote
 * sessions); reply_out is caller-freed. */
int prioport_port_admin(prioport_port* p, const char* command,
                        char** reply_out);

/* ------------------------------------------------------------------ */
/* Administrative sessions (remote)                                    */

typedef struct prioport_admin prioport_admin;

/* Opens an admin session to a registered port. */
int prioport_admin_open(const char* target, const char* nameserver,
                        prioport_admin** out);
/* One command in, one reply out; reply_out is caller-freed. */
int prioport_admin_request(prioport_admin* a, const char* command,
                           int timeout_ms, char** reply_out);
void prioport_admin_close(prioport_admin* a);

/* ------------------------------------------------------------------ */
/* Benchmark driver                                                    */

typedef struct {
  const char* scenario;      /* "nic" | "switch" */
  int qos;                   /* 0 | 1 */
  double load_fraction;      /* 0 <= f <= 1 */
  const char* probe_carrier; /* "tcp" | "udp"; NULL = tcp */
  const char* load_carrier;  /* NULL = tcp */
  int emulate;               /* 1 = deterministic virtual-time mode */
  uint64_t seed;
  /* Zero selects the default for each of the following. */
  size_t probe_size_bytes; /* default 1 KiB (nic) / 32 KiB (switch) */
  double probe_rate_hz;    /* default 100 */
  size_t probe_count;      /* default 300 */
  size_t probe_warmup;     /* default 100 */
  size_t load_message_bytes;  /* default 32 KiB */
  uint64_t link_bytes_per_sec; /* default 125000000 (1 Gbit/s) */
  const char* topology_file; /* emulated-topology override, NULL = built-in */
  const char* nameserver;    /* real mode only; NULL = spin a private one */
} prioport_bench_config;

typedef struct {
  char scenario[16];
  int qos;
  double load_fraction;
  char probe_carrier[16];
  char load_carrier[16];
  size_t n;
  double mean_ns;
  double stddev_ns;
  uint64_t drops;
} prioport_bench_row;

int prioport_bench_run(const prioport_bench_config* config,
                       prioport_bench_row* row_out);
const char* prioport_bench_csv_header(void);
/* One CSV line for a row (no newline); caller frees. */
int prioport_bench_row_csv(const prioport_bench_row* row, char** line_out);
/* Grouped-bars SVG for a set of rows; caller frees. */
int prioport_bench_plot(const prioport_bench_row* rows, size_t count,
                        const char* title, char** svg_out);

/* ------------------------------------------------------------------ */
/* Emulated-topology inspection                                        */

/* Parses a topology file and renders a one-line-per-element summary;
 * summary_out is caller-freed. */
int prioport_topology_check(const char* path, char** summary_out);

#ifdef __cplusplus
}
#endif

#endif /* PRIOPORT_H */
