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

#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "sacbeta/neural/tensor.hpp"

namespace sacbeta::nn {

struct Dense {
  Parameter weight;  // in × out
  Parameter bias;    // 1 × out
};

/// Fully connected network: affine + ReLU for every hidden layer, then a
/// linear output head.
class Mlp {
 public:
  Mlp() = default;
  /// Weights and biases are drawn uniformly from ±1/sqrt(fan_in).
  Mlp(std::string name, std::size_t inputs, std::vector<std::size_t> hidden, std::size_t outputs,
      std::mt19937_64& rng);

  std::size_t input_width() const { return inputs_; }
  std::size_t output_width() const { return outputs_; }

  /// Differentiable forward pass; gradients reach the parameters.
  Tensor forward(Tape& tape, const Tensor& input);
  /// Differentiable with respect to the input only; parameters are frozen.
  Tensor forward_frozen(Tape& tape, const Tensor& input) const;
  /// Plain evaluation with nothing recorded.
  Matrix infer(const Matrix& input) const;

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  void zero_grad();
  /// this ← (1 - tau)·this + tau·source, parameter by parameter.
  void polyak_update(const Mlp& source, double tau);
  void copy_from(const Mlp& source);
  bool all_finite() const;

 private:
  void check_input(Eigen::Index cols) const;

  std::size_t inputs_ = 0;
  std::size_t outputs_ = 0;
  std::vector<Dense> layers_;
};

}  // namespace sacbeta::nn
