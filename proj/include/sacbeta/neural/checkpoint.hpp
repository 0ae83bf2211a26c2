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

// Checkpoint file layout (all integers little-endian):
//
//   bytes 0..7   magic "SACBCKPT"
//   u32          format version (1)
//   u64          length N of the index
//   N bytes      JSON index: {"version":1, "metadata":{...},
//                "tensors":[{"name":..., "shape":[rows, cols]}, ...]}
//   then, for every tensor in index order:
//   u64          payload length in bytes (rows*cols*8)
//   payload      row-major IEEE-754 binary64 values

#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sacbeta/neural/tensor.hpp"

namespace sacbeta::nn {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Checkpoint {
  std::map<std::string, std::string> metadata;
  std::vector<std::pair<std::string, Matrix>> arrays;

  const Matrix& at(const std::string& name) const;
};

void save_checkpoint(const std::filesystem::path& path, const std::vector<const Parameter*>& params,
                     const std::map<std::string, std::string>& metadata = {});

Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Copies arrays into parameters matched by name; shapes must agree.
void restore(const Checkpoint& checkpoint, const std::vector<Parameter*>& params);

}  // namespace sacbeta::nn
