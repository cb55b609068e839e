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

#include <optional>

#include "net/socket.hpp"
#include "wire/frame.hpp"

namespace prioport::wire {

// Blocking frame transfer over a stream socket. Throws Error{io_error} on
// transport failure and mid-frame EOF.
void send_frame(const net::Fd& fd, const Frame& f);

// nullopt on orderly EOF at a frame boundary; throws Error{truncated} on
// mid-frame EOF, Error{bad_magic}/... on undecodable input.
std::optional<Frame> recv_frame(const net::Fd& fd);

}  // namespace prioport::wire
