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

#include <sys/socket.h>

#include <cerrno>
#include <optional>
#include <string>

#include "net/socket.hpp"

namespace prioport::net {

// Buffered newline-delimited reader over a stream socket. Lines are returned
// without the terminating '\n' (a preceding '\r' is stripped too).
class LineReader {
 public:
  explicit LineReader(const Fd& fd) : fd_(fd) {}

  // nullopt on orderly EOF or connection reset.
  std::optional<std::string> read_line() {
    for (;;) {
      auto pos = buffer_.find('\n');
      if (pos != std::string::npos) {
        std::string line = buffer_.substr(0, pos);
        buffer_.erase(0, pos + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      char chunk[1024];
      ssize_t n = ::recv(fd_.get(), chunk, sizeof(chunk), 0);
      if (n > 0) {
        buffer_.append(chunk, static_cast<size_t>(n));
        continue;
      }
      if (n < 0 && errno == EINTR) continue;
      return std::nullopt;
    }
  }

 private:
  const Fd& fd_;
  std::string buffer_;
};

}  // namespace prioport::net
