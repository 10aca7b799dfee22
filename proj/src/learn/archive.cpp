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

#include "oda/learn/archive.hpp"

#include <cstring>

#include "oda/common/bytes.hpp"
#include "oda/common/error.hpp"
#include "oda/common/hash.hpp"
#include "oda/common/io.hpp"

namespace oda::learn {
namespace {

constexpr char kMagic[] = "ODACKPT1\n";
constexpr std::size_t kMagicLen = sizeof(kMagic) - 1;

void put_string(std::vector<std::byte>& out, const std::string& s) {
  put_u64(out, s.size());
  for (char c : s) out.push_back(static_cast<std::byte>(c));
}

class Reader {
 public:
  explicit Reader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::uint64_t u64() {
    need(8);
    const std::uint64_t v = get_u64(bytes_.data() + pos_);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint64_t n = u64();
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }

 private:
  void need(std::uint64_t n) const {
    if (n > bytes_.size() - pos_) {
      throw TruncatedFileError("checkpoint truncated at byte " +
                               std::to_string(pos_));
    }
  }
  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

std::string moment_name(const std::string& prefix, const char* which,
                        std::size_t i) {
  return prefix + ":" + which + ":" + std::to_string(i);
}

}  // namespace

const std::string& Archive::get(const std::string& key) const {
  auto it = meta.find(key);
  if (it == meta.end()) throw FormatError("checkpoint lacks key '" + key + "'");
  return it->second;
}

const Eigen::MatrixXd& Archive::array(const std::string& name) const {
  for (const auto& [n, m] : arrays) {
    if (n == name) return m;
  }
  throw FormatError("checkpoint lacks array '" + name + "'");
}

bool Archive::has_array(const std::string& name) const {
  for (const auto& [n, m] : arrays) {
    if (n == name) return true;
  }
  return false;
}

std::vector<std::byte> encode_archive(const Archive& a) {
  std::vector<std::byte> out;
  for (std::size_t i = 0; i < kMagicLen; ++i) {
    out.push_back(static_cast<std::byte>(kMagic[i]));
  }
  put_u64(out, a.meta.size());
  for (const auto& [k, v] : a.meta) {
    put_string(out, k);
    put_string(out, v);
  }
  put_u64(out, a.arrays.size());
  for (const auto& [name, m] : a.arrays) {
    put_string(out, name);
    put_u64(out, static_cast<std::uint64_t>(m.rows()));
    put_u64(out, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.size(); ++i) put_f64(out, m.data()[i]);
  }
  const auto payload = std::span(out).subspan(kMagicLen);
  put_u64(out, fnv1a(payload));
  return out;
}

Archive decode_archive(std::span<const std::byte> bytes) {
  if (bytes.size() < kMagicLen ||
      std::memcmp(bytes.data(), kMagic, kMagicLen - 2) != 0) {
    if (bytes.size() < kMagicLen) throw TruncatedFileError("checkpoint too short");
    throw FormatError("not a checkpoint file");
  }
  if (std::memcmp(bytes.data(), kMagic, kMagicLen) != 0) {
    throw VersionMismatchError("unsupported checkpoint version");
  }
  if (bytes.size() < kMagicLen + 8) throw TruncatedFileError("checkpoint too short");
  const auto body = bytes.subspan(kMagicLen, bytes.size() - kMagicLen - 8);
  Reader r(body);
  Archive a;
  const std::uint64_t n_meta = r.u64();
  for (std::uint64_t i = 0; i < n_meta; ++i) {
    std::string k = r.str();
    a.meta[k] = r.str();
  }
  const std::uint64_t n_arrays = r.u64();
  for (std::uint64_t i = 0; i < n_arrays; ++i) {
    std::string name = r.str();
    const std::uint64_t rows = r.u64();
    const std::uint64_t cols = r.u64();
    if (rows > (1u << 24) || cols > (1u << 24)) {
      throw FormatError("implausible array shape for " + name);
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows),
                      static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < m.size(); ++j) m.data()[j] = r.f64();
    a.arrays.emplace_back(std::move(name), std::move(m));
  }
  if (r.pos() != body.size()) {
    // Either trailing garbage or a damaged length field; the checksum
    // decides which is reported.
    if (fnv1a(body) != get_u64(bytes.data() + bytes.size() - 8)) {
      throw ChecksumError("checkpoint checksum mismatch");
    }
    throw FormatError("unexpected bytes after checkpoint payload");
  }
  if (fnv1a(body) != get_u64(bytes.data() + bytes.size() - 8)) {
    throw ChecksumError("checkpoint checksum mismatch");
  }
  return a;
}

void save_archive(const Archive& a, const std::filesystem::path& path) {
  write_binary_file(path, encode_archive(a));
}

Archive load_archive(const std::filesystem::path& path) {
  return decode_archive(read_binary_file(path));
}

void put_params(Archive& a, const std::string& prefix, const ParamSet& params) {
  for (const auto& e : params) a.arrays.emplace_back(prefix + ":" + e.name, e.value);
}

void get_params(const Archive& a, const std::string& prefix, ParamSet& params) {
  for (auto& e : params) {
    const Eigen::MatrixXd& m = a.array(prefix + ":" + e.name);
    if (m.rows() != e.value.rows() || m.cols() != e.value.cols()) {
      throw FormatError("shape mismatch for " + prefix + ":" + e.name);
    }
    e.value = m;
    e.grad.setZero();
  }
}

void put_adam(Archive& a, const std::string& prefix, const AdamState& s) {
  a.meta[prefix + ":step"] = std::to_string(s.step);
  for (std::size_t i = 0; i < s.m.size(); ++i) {
    a.arrays.emplace_back(moment_name(prefix, "m", i), s.m[i]);
    a.arrays.emplace_back(moment_name(prefix, "v", i), s.v[i]);
  }
}

AdamState get_adam(const Archive& a, const std::string& prefix,
                   const ParamSet& shape) {
  AdamState s = AdamState::zeros_like(shape);
  s.step = std::stol(a.get(prefix + ":step"));
  for (std::size_t i = 0; i < s.m.size(); ++i) {
    const Eigen::MatrixXd& m = a.array(moment_name(prefix, "m", i));
    const Eigen::MatrixXd& v = a.array(moment_name(prefix, "v", i));
    if (m.rows() != s.m[i].rows() || m.cols() != s.m[i].cols() ||
        v.rows() != s.v[i].rows() || v.cols() != s.v[i].cols()) {
      throw FormatError("optimizer state shape mismatch in " + prefix);
    }
    s.m[i] = m;
    s.v[i] = v;
  }
  return s;
}

}  // namespace oda::learn
