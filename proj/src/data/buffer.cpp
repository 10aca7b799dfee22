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

#include "oda/data/buffer.hpp"

#include <cstring>
#include <sstream>

#include "oda/common/bytes.hpp"
#include "oda/common/error.hpp"
#include "oda/common/hash.hpp"
#include "oda/common/io.hpp"

namespace oda::data {

namespace {
const std::vector<std::size_t> kNoIndices;
}

void Buffer::append(const Transition& t) {
  const std::size_t i = transitions_.size();
  transitions_.push_back(t);
  by_task_[t.task_id].push_back(i);
  if (t.source == Source::kDemo) demos_by_task_[t.task_id].push_back(i);
  if (t.done) ++episodes_;
}

void Buffer::append(const Episode& ep) {
  for (const Transition& t : ep.transitions) append(t);
}

void Buffer::append(const Buffer& other) {
  for (const Transition& t : other.transitions_) append(t);
}

std::size_t Buffer::count(int task_id) const {
  return indices(task_id).size();
}

std::size_t Buffer::demo_count(int task_id) const {
  return demo_indices(task_id).size();
}

std::vector<int> Buffer::task_ids() const {
  std::vector<int> ids;
  for (const auto& [id, idx] : by_task_) ids.push_back(id);
  return ids;
}

const std::vector<std::size_t>& Buffer::indices(int task_id) const {
  auto it = by_task_.find(task_id);
  return it == by_task_.end() ? kNoIndices : it->second;
}

const std::vector<std::size_t>& Buffer::demo_indices(int task_id) const {
  auto it = demos_by_task_.find(task_id);
  return it == demos_by_task_.end() ? kNoIndices : it->second;
}

std::vector<Transition> sample_batch(const Buffer& buffer, int task_id,
                                     std::size_t batch_size, Rng& rng) {
  const auto& idx = buffer.indices(task_id);
  if (idx.empty()) {
    throw ContractError("no transitions for task " + std::to_string(task_id));
  }
  std::vector<Transition> out;
  out.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) {
    out.push_back(buffer[idx[rng.uniform_index(idx.size())]]);
  }
  return out;
}

std::vector<Transition> sample_context(const Buffer& demo_buffer, int task_id,
                                       std::size_t context_size, Rng& rng) {
  if (demo_buffer.count(task_id) == 0) {
    throw ContractError("unknown task " + std::to_string(task_id));
  }
  const auto& idx = demo_buffer.demo_indices(task_id);
  if (idx.empty()) {
    throw ContractError("no demo data for task " + std::to_string(task_id));
  }
  std::vector<Transition> out;
  out.reserve(context_size);
  for (std::size_t i = 0; i < context_size; ++i) {
    out.push_back(demo_buffer[idx[rng.uniform_index(idx.size())]]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// File format

namespace {

constexpr char kMagic[] = "ODABUF1\n";
constexpr std::size_t kMagicLen = sizeof(kMagic) - 1;

std::string source_runs(const Buffer& b) {
  std::ostringstream out;
  const auto& tr = b.transitions();
  std::size_t i = 0;
  bool first = true;
  while (i < tr.size()) {
    std::size_t j = i;
    while (j < tr.size() && tr[j].source == tr[i].source) ++j;
    out << (first ? "" : ",") << to_string(tr[i].source) << ":" << (j - i);
    first = false;
    i = j;
  }
  return out.str();
}

std::vector<Source> parse_source_runs(const std::string& s, std::size_t n) {
  std::vector<Source> out;
  out.reserve(n);
  std::istringstream in(s);
  std::string run;
  while (std::getline(in, run, ',')) {
    const auto colon = run.rfind(':');
    if (colon == std::string::npos) throw FormatError("bad source run");
    const Source src = source_from_string(run.substr(0, colon));
    const std::size_t len = std::stoull(run.substr(colon + 1));
    out.insert(out.end(), len, src);
  }
  if (out.size() != n) throw FormatError("source runs do not cover buffer");
  return out;
}

}  // namespace

std::vector<std::byte> encode_buffer(const Buffer& buffer) {
  std::ostringstream header;
  header << kMagic << "schema_version=" << kBufferSchemaVersion << "\n"
         << "obs_dim=" << sim::kObsDim << "\n"
         << "act_dim=" << sim::kActDim << "\n"
         << "transition_count=" << buffer.size() << "\n"
         << "task_ids=";
  const auto ids = buffer.task_ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    header << (i ? "," : "") << ids[i];
  }
  header << "\n"
         << "source_runs=" << source_runs(buffer) << "\n\n";
  const std::string h = header.str();

  std::vector<std::byte> out;
  out.reserve(h.size() + buffer.size() * kRecordBytes + 8);
  for (char c : h) out.push_back(static_cast<std::byte>(c));
  const std::size_t payload_begin = out.size();
  for (const Transition& t : buffer.transitions()) {
    put_u64(out, static_cast<std::uint64_t>(static_cast<std::int64_t>(t.task_id)));
    for (double v : t.s) put_f64(out, v);
    for (double v : t.a) put_f64(out, v);
    put_f64(out, t.r);
    for (double v : t.s_next) put_f64(out, v);
    for (double v : t.a_next) put_f64(out, v);
    out.push_back(static_cast<std::byte>(t.done ? 1 : 0));
    out.push_back(static_cast<std::byte>(t.a_next_valid ? 1 : 0));
  }
  const std::uint64_t checksum = fnv1a(
      std::span(out.data() + payload_begin, out.size() - payload_begin));
  put_u64(out, checksum);
  return out;
}

Buffer decode_buffer(std::span<const std::byte> bytes) {
  auto as_char = [&](std::size_t i) { return static_cast<char>(bytes[i]); };
  if (bytes.size() < kMagicLen) throw TruncatedFileError("file too short");
  const std::string magic(reinterpret_cast<const char*>(bytes.data()),
                          kMagicLen);
  if (magic.rfind("ODABUF", 0) != 0) throw FormatError("not a dataset file");
  if (magic != kMagic) {
    throw VersionMismatchError("unsupported dataset format " +
                               magic.substr(0, kMagicLen - 1));
  }
  // Header lines until an empty line.
  std::size_t pos = kMagicLen;
  std::map<std::string, std::string> header;
  for (;;) {
    std::size_t end = pos;
    while (end < bytes.size() && as_char(end) != '\n') ++end;
    if (end >= bytes.size()) throw TruncatedFileError("header not terminated");
    std::string line(reinterpret_cast<const char*>(bytes.data()) + pos,
                     end - pos);
    pos = end + 1;
    if (line.empty()) break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("bad header line: " + line);
    header[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto require = [&](const std::string& k) -> const std::string& {
    auto it = header.find(k);
    if (it == header.end()) throw FormatError("missing header key " + k);
    return it->second;
  };
  if (require("schema_version") != std::to_string(kBufferSchemaVersion)) {
    throw VersionMismatchError("schema_version " + header["schema_version"] +
                               " is not supported");
  }
  if (require("obs_dim") != std::to_string(sim::kObsDim) ||
      require("act_dim") != std::to_string(sim::kActDim)) {
    throw FormatError("dimension mismatch in dataset header");
  }
  const std::size_t n = std::stoull(require("transition_count"));
  const std::size_t need = pos + n * kRecordBytes + 8;
  if (bytes.size() < need) {
    throw TruncatedFileError("dataset truncated: expected " +
                             std::to_string(need) + " bytes, have " +
                             std::to_string(bytes.size()));
  }
  if (bytes.size() > need) throw FormatError("trailing bytes after checksum");
  const std::uint64_t stored = get_u64(bytes.data() + pos + n * kRecordBytes);
  const std::uint64_t actual = fnv1a(bytes.subspan(pos, n * kRecordBytes));
  if (stored != actual) throw ChecksumError("dataset checksum mismatch");

  const std::vector<Source> sources =
      header.count("source_runs") && n > 0
          ? parse_source_runs(header["source_runs"], n)
          : std::vector<Source>(n, Source::kRl);

  Buffer b;
  const std::byte* p = bytes.data() + pos;
  for (std::size_t i = 0; i < n; ++i) {
    Transition t;
    t.task_id = static_cast<int>(static_cast<std::int64_t>(get_u64(p)));
    p += 8;
    for (double& v : t.s) v = get_f64(p), p += 8;
    for (double& v : t.a) v = get_f64(p), p += 8;
    t.r = get_f64(p), p += 8;
    for (double& v : t.s_next) v = get_f64(p), p += 8;
    for (double& v : t.a_next) v = get_f64(p), p += 8;
    t.done = p[0] != std::byte{0};
    t.a_next_valid = p[1] != std::byte{0};
    p += 2;
    t.source = sources[i];
    b.append(t);
  }
  return b;
}

void save_buffer(const Buffer& buffer, const std::filesystem::path& path) {
  write_binary_file(path, encode_buffer(buffer));
}

Buffer load_buffer(const std::filesystem::path& path) {
  return decode_buffer(read_binary_file(path));
}

}  // namespace oda::data
