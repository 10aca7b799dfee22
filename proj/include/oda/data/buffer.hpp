// Copyright 2026 The ODA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "oda/common/rng.hpp"
#include "oda/data/transition.hpp"

namespace oda::data {

// Append-only transition store indexed by task.
class Buffer {
 public:
  void append(const Transition& t);
  void append(const Episode& ep);
  void append(const Buffer& other);

  std::size_t size() const { return transitions_.size(); }
  bool empty() const { return transitions_.empty(); }
  std::size_t episode_count() const { return episodes_; }

  // Number of transitions stored for a task (0 for unknown tasks).
  std::size_t count(int task_id) const;
  std::size_t demo_count(int task_id) const;
  std::vector<int> task_ids() const;

  const std::vector<Transition>& transitions() const { return transitions_; }
  const Transition& operator[](std::size_t i) const { return transitions_[i]; }

  // Indices into transitions() belonging to a task, in append order.
  const std::vector<std::size_t>& indices(int task_id) const;
  const std::vector<std::size_t>& demo_indices(int task_id) const;

  bool operator==(const Buffer& o) const {
    return transitions_ == o.transitions_;
  }

 private:
  std::vector<Transition> transitions_;
  std::map<int, std::vector<std::size_t>> by_task_;
  std::map<int, std::vector<std::size_t>> demos_by_task_;
  std::size_t episodes_ = 0;
};

// Uniform sampling with replacement among the task's transitions.
// Throws ContractError for a task with no transitions.
std::vector<Transition> sample_batch(const Buffer& buffer, int task_id,
                                     std::size_t batch_size, Rng& rng);

// Uniform sampling among the task's demo-source transitions, with
// replacement. Throws ContractError when the task has no demo data.
std::vector<Transition> sample_context(const Buffer& demo_buffer, int task_id,
                                       std::size_t context_size, Rng& rng);

// Binary dataset file: "ODABUF1\n", key=value header lines, blank line,
// fixed-width little-endian records, 64-bit FNV-1a checksum trailer.
void save_buffer(const Buffer& buffer, const std::filesystem::path& path);
Buffer load_buffer(const std::filesystem::path& path);

// In-memory forms of the same format.
std::vector<std::byte> encode_buffer(const Buffer& buffer);
Buffer decode_buffer(std::span<const std::byte> bytes);

inline constexpr int kBufferSchemaVersion = 1;
// task_id + (9 + 3 + 1 + 9 + 3) doubles + 2 flag bytes.
inline constexpr std::size_t kRecordBytes = 8 + 25 * 8 + 2;

}  // namespace oda::data
