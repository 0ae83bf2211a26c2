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

#include "sacbeta/neural/mlp.hpp"

#include <cmath>

namespace sacbeta::nn {

Mlp::Mlp(std::string name, std::size_t inputs, std::vector<std::size_t> hidden, std::size_t outputs,
         std::mt19937_64& rng)
    : inputs_(inputs), outputs_(outputs) {
  if (inputs == 0 || outputs == 0) throw ShapeError("Mlp: zero-width input or output");
  std::vector<std::size_t> widths{inputs};
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(outputs);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const auto fan_in = static_cast<Eigen::Index>(widths[l]);
    const auto fan_out = static_cast<Eigen::Index>(widths[l + 1]);
    const double limit = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> init(-limit, limit);
    Matrix w(fan_in, fan_out);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = init(rng);
    Matrix b(1, fan_out);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = init(rng);
    const std::string prefix = name + ".layer" + std::to_string(l);
    layers_.push_back({Parameter(prefix + ".weight", std::move(w)), Parameter(prefix + ".bias", std::move(b))});
  }
}

void Mlp::check_input(Eigen::Index cols) const {
  if (static_cast<std::size_t>(cols) != inputs_) {
    throw ShapeError("Mlp: expected input width " + std::to_string(inputs_) + ", got " +
                     std::to_string(cols));
  }
}

Tensor Mlp::forward(Tape& tape, const Tensor& input) {
  check_input(input.cols());
  Tensor h = input;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    h = linear(h, tape.parameter(layers_[l].weight), tape.parameter(layers_[l].bias));
    if (l + 1 < layers_.size()) h = relu(h);
  }
  return h;
}

Tensor Mlp::forward_frozen(Tape& tape, const Tensor& input) const {
  check_input(input.cols());
  Tensor h = input;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    h = linear(h, tape.frozen(layers_[l].weight), tape.frozen(layers_[l].bias));
    if (l + 1 < layers_.size()) h = relu(h);
  }
  return h;
}

Matrix Mlp::infer(const Matrix& input) const {
  check_input(input.cols());
  Matrix h = input;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Matrix next(h.rows(), layers_[l].weight.value.cols());
    next.noalias() = h * layers_[l].weight.value;
    next.rowwise() += layers_[l].bias.value.row(0);
    if (l + 1 < layers_.size()) next = next.cwiseMax(0.0);
    h = std::move(next);
  }
  return h;
}

std::vector<Parameter*> Mlp::parameters() {
  std::vector<Parameter*> out;
  for (Dense& d : layers_) {
    out.push_back(&d.weight);
    out.push_back(&d.bias);
  }
  return out;
}

std::vector<const Parameter*> Mlp::parameters() const {
  std::vector<const Parameter*> out;
  for (const Dense& d : layers_) {
    out.push_back(&d.weight);
    out.push_back(&d.bias);
  }
  return out;
}

void Mlp::zero_grad() {
  for (Parameter* p : parameters()) p->zero_grad();
}

void Mlp::polyak_update(const Mlp& source, double tau) {
  auto dst = parameters();
  auto src = source.parameters();
  if (dst.size() != src.size()) throw ShapeError("polyak_update: architectures differ");
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (dst[i]->value.rows() != src[i]->value.rows() || dst[i]->value.cols() != src[i]->value.cols()) {
      throw ShapeError("polyak_update: parameter shapes differ");
    }
    dst[i]->value = (1.0 - tau) * dst[i]->value + tau * src[i]->value;
  }
}

void Mlp::copy_from(const Mlp& source) {
  auto dst = parameters();
  auto src = source.parameters();
  if (dst.size() != src.size()) throw ShapeError("copy_from: architectures differ");
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i]->value = src[i]->value;
}

bool Mlp::all_finite() const {
  for (const Parameter* p : parameters()) {
    if (!p->value.allFinite()) return false;
  }
  return true;
}

}  // namespace sacbeta::nn
