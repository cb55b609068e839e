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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>

namespace prioport::port {

// Bounded FIFO with drop-oldest overflow, the per-channel message queue.
// Push never blocks; that is the decoupling contract between publish() and
// the channel threads.
template <typename T>
class BoundedQueue {
 public:
  explicit BoundedQueue(size_t capacity) : capacity_(capacity) {}

  // Returns how many old elements were evicted to make room (0 or 1).
  size_t push(T value) {
    size_t evicted = 0;
    {
      std::lock_guard lock(mu_);
      while (items_.size() >= capacity_) {
        items_.pop_front();
        ++evicted;
      }
      items_.push_back(std::move(value));
    }
    not_empty_.notify_one();
    return evicted;
  }

  std::optional<T> try_pop() {
    std::lock_guard lock(mu_);
    if (items_.empty()) return std::nullopt;
    T value = std::move(items_.front());
    items_.pop_front();
    return value;
  }

  // Blocks until an element arrives, `stop` is raised, or wait_ms elapses
  // (wait_ms < 0 waits indefinitely). The stop flag is re-checked at wakeup,
  // so raisers only need a notify() after setting it.
  std::optional<T> pop_wait(const std::atomic<bool>& stop, int wait_ms = -1) {
    std::unique_lock lock(mu_);
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::milliseconds(wait_ms < 0 ? 0 : wait_ms);
    for (;;) {
      if (!items_.empty()) {
        T value = std::move(items_.front());
        items_.pop_front();
        return value;
      }
      if (stop.load()) return std::nullopt;
      if (wait_ms < 0) {
        not_empty_.wait_for(lock, std::chrono::milliseconds(100));
      } else {
        if (not_empty_.wait_until(lock, deadline) ==
            std::cv_status::timeout) {
          return std::nullopt;
        }
      }
    }
  }

  // Like pop_wait, but only takes an element while `gate()` holds at the
  // wakeup instant; while the gate is shut, elements stay queued (and keep
  // aging out oldest-first under push pressure). The gate must not block or
  // take locks ordered above this queue. Gate reopening has no notifier, so
  // waits poll in 100ms slices.
  template <typename Gate>
  std::optional<T> pop_wait_when(const std::atomic<bool>& stop, Gate gate,
                                 int wait_ms = -1) {
    std::unique_lock lock(mu_);
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::milliseconds(wait_ms < 0 ? 0 : wait_ms);
    for (;;) {
      if (!items_.empty() && gate()) {
        T value = std::move(items_.front());
        items_.pop_front();
        return value;
      }
      if (stop.load()) return std::nullopt;
      if (wait_ms < 0) {
        not_empty_.wait_for(lock, std::chrono::milliseconds(100));
      } else {
        const auto slice = std::min(
            deadline, std::chrono::steady_clock::now() +
                          std::chrono::milliseconds(100));
        not_empty_.wait_until(lock, slice);
        if (std::chrono::steady_clock::now() >= deadline) return std::nullopt;
      }
    }
  }

  // Shrinking evicts from the front; returns the eviction count.
  size_t set_capacity(size_t capacity) {
    std::lock_guard lock(mu_);
    capacity_ = capacity;
    size_t evicted = 0;
    while (items_.size() > capacity_) {
      items_.pop_front();
      ++evicted;
    }
    return evicted;
  }

  size_t capacity() const {
    std::lock_guard lock(mu_);
    return capacity_;
  }

  size_t size() const {
    std::lock_guard lock(mu_);
    return items_.size();
  }

  void clear() {
    std::lock_guard lock(mu_);
    items_.clear();
  }

  void notify() { not_empty_.notify_all(); }

 private:
  mutable std::mutex mu_;
  std::condition_variable not_empty_;
  std::deque<T> items_;
  size_t capacity_;
};

}  // namespace prioport::port
