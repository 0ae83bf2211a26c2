// Copyright 2026 The sacbeta Authors.
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

#include "sacbeta/neural/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "json.hpp"

namespace sacbeta::nn {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[8] = {'S', 'A', 'C', 'B', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw CheckpointError("checkpoint truncated");
  return v;
}

}  // namespace

const Matrix& Checkpoint::at(const std::string& name) const {
  for (const auto& [n, m] : arrays) {
    if (n == name) return m;
  }
  throw CheckpointError("checkpoint has no array named '" + name + "'");
}

void save_checkpoint(const std::filesystem::path& path, const std::vector<const Parameter*>& params,
                     const std::map<std::string, std::string>& metadata) {
  nlohmann::json index;
  index["version"] = kVersion;
  index["metadata"] = metadata;
  index["tensors"] = nlohmann::json::array();
  for (const Parameter* p : params) {
    index["tensors"].push_back({{"name", p->name}, {"shape", {p->value.rows(), p->value.cols()}}});
  }
  const std::string text = index.dump(2);

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw CheckpointError("cannot open '" + path.string() + "' for writing");
  os.write(kMagic, sizeof(kMagic));
  write_pod<std::uint32_t>(os, kVersion);
  write_pod<std::uint64_t>(os, text.size());
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const Parameter* p : params) {
    const std::uint64_t bytes = static_cast<std::uint64_t>(p->value.size()) * sizeof(double);
    write_pod<std::uint64_t>(os, bytes);
    os.write(reinterpret_cast<const char*>(p->value.data()), static_cast<std::streamsize>(bytes));
  }
  if (!os) throw CheckpointError("failed writing '" + path.string() + "'");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CheckpointError("cannot open '" + path.string() + "'");
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError("'" + path.string() + "' is not a checkpoint");
  }
  if (read_pod<std::uint32_t>(is) != kVersion) throw CheckpointError("unsupported checkpoint version");
  const auto index_len = read_pod<std::uint64_t>(is);
  std::string text(index_len, '\0');
  if (!is.read(text.data(), static_cast<std::streamsize>(index_len))) throw CheckpointError("checkpoint truncated");

  Checkpoint out;
  const nlohmann::json index = nlohmann::json::parse(text);
  out.metadata = index.at("metadata").get<std::map<std::string, std::string>>();
  for (const auto& entry : index.at("tensors")) {
    const auto rows = entry.at("shape").at(0).get<Eigen::Index>();
    const auto cols = entry.at("shape").at(1).get<Eigen::Index>();
    const auto bytes = read_pod<std::uint64_t>(is);
    if (bytes != static_cast<std::uint64_t>(rows * cols) * sizeof(double)) {
      throw CheckpointError("record length does not match shape for '" + entry.at("name").get<std::string>() + "'");
    }
    Matrix m(rows, cols);
    if (!is.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(bytes))) {
      throw CheckpointError("checkpoint truncated");
    }
    out.arrays.emplace_back(entry.at("name").get<std::string>(), std::move(m));
  }
  return out;
}

void restore(const Checkpoint& checkpoint, const std::vector<Parameter*>& params) {
  for (Parameter* p : params) {
    const Matrix& m = checkpoint.at(p->name);
    if (m.rows() != p->value.rows() || m.cols() != p->value.cols()) {
      throw CheckpointError("shape mismatch restoring '" + p->name + "'");
    }
    p->value = m;
  }
}

}  // namespace sacbeta::nn
