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

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oda/learn/adam.hpp"
#include "oda/learn/param_set.hpp"

namespace oda::learn {

// Self-describing keyed container used for checkpoints: string metadata
// plus named 64-bit float arrays, protected by an FNV-1a checksum.
//
//   "ODACKPT1\n"
//   u64 n_meta, then per entry: u64 len, key bytes, u64 len, value bytes
//   u64 n_arrays, then per array: u64 len, name bytes, u64 rows, u64 cols,
//       rows*cols f64 (column-major)
//   u64 checksum of everything after the magic
struct Archive {
  std::map<std::string, std::string> meta;
  std::vector<std::pair<std::string, Eigen::MatrixXd>> arrays;

  const std::string& get(const std::string& key) const;
  const Eigen::MatrixXd& array(const std::string& name) const;
  bool has_array(const std::string& name) const;

  bool operator==(const Archive&) const = default;
};

std::vector<std::byte> encode_archive(const Archive& a);
// FormatError family as for buffers: VersionMismatchError,
// TruncatedFileError, ChecksumError.
Archive decode_archive(std::span<const std::byte> bytes);

void save_archive(const Archive& a, const std::filesystem::path& path);
Archive load_archive(const std::filesystem::path& path);

// Stores every entry of `params` as "<prefix>:<entry name>".
void put_params(Archive& a, const std::string& prefix, const ParamSet& params);
// Fills `params` (already shaped) from the archive; shapes must match.
void get_params(const Archive& a, const std::string& prefix, ParamSet& params);

void put_adam(Archive& a, const std::string& prefix, const AdamState& s);
// `shape` provides the expected moment shapes.
AdamState get_adam(const Archive& a, const std::string& prefix,
                   const ParamSet& shape);

}  // namespace oda::learn
