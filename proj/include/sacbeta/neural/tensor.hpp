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

// Reverse-mode differentiation over dense row-major matrices.
//
// A Tape records every operation applied to its Tensors. Calling backward()
// on a scalar loss walks the record in reverse and accumulates gradients into
// every reachable Tensor and into the Parameters registered on the tape.
// Tensors are batch-major: rows index the batch, columns the features.

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sacbeta::nn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TapeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A trainable array. `grad` has the same shape as `value` and is filled by
/// Tape::backward.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  Parameter() = default;
  Parameter(std::string n, Matrix v)
      : name(std::move(n)), value(std::move(v)), grad(Matrix::Zero(value.rows(), value.cols())) {}

  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

class Tape;

/// Handle to a value recorded on a Tape.
class Tensor {
 public:
  Tensor() = default;

  const Matrix& value() const;
  /// Gradient of the last backward() pass; empty if the node was unreached.
  const Matrix& grad() const;
  bool requires_grad() const;
  std::array<Eigen::Index, 2> shape() const { return {value().rows(), value().cols()}; }
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  double item() const;

  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }

 private:
  friend class Tape;
  Tensor(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

class Tape {
 public:
  using Backward = std::function<void(Tape&, const Matrix& grad_out)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf with no gradient.
  Tensor constant(Matrix value);
  /// Leaf that receives a gradient (for tests and custom inputs).
  Tensor variable(Matrix value);
  /// Tracked view of a parameter; backward() adds into `param.grad`.
  Tensor parameter(Parameter& param);
  /// Untracked view of a parameter; no gradient reaches it.
  Tensor frozen(const Parameter& param);

  /// Records an operation. `backward` is invoked only if some input requires
  /// a gradient.
  Tensor record(Matrix value, std::vector<Tensor> inputs, Backward backward);

  /// Reverse pass from a 1x1 tensor. A tape can be consumed only once.
  void backward(const Tensor& loss);

  /// Adds `g` into the gradient slot of `t` (no-op for untracked tensors).
  template <typename Expr>
  void accumulate(const Tensor& t, const Expr& g) {
    Node& n = nodes_[t.id_];
    if (!n.requires_grad) return;
    if (n.grad.size() == 0) {
      n.grad = g;
    } else {
      n.grad += g;
    }
  }

  const Matrix& value(std::size_t id) const;
  const Matrix& grad(std::size_t id) const { return nodes_.at(id).grad; }
  bool requires_grad(std::size_t id) const { return nodes_.at(id).requires_grad; }
  std::size_t size() const { return nodes_.size(); }
  bool consumed() const { return consumed_; }

 private:
  struct Node {
    Matrix owned;
    const Matrix* external = nullptr;
    Matrix grad;
    bool requires_grad = false;
    Parameter* param = nullptr;
    Backward backward;
  };

  Tensor push(Node node);

  std::vector<Node> nodes_;
  bool consumed_ = false;
};

// ---------------------------------------------------------------------------
// Operations. All inputs must live on the same tape.

/// x·W + b with x (n×in), W (in×out), b (1×out).
Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias);
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor relu(const Tensor& x);
Tensor tanh(const Tensor& x);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
/// scale·x + shift, elementwise.
Tensor affine(const Tensor& x, double scale, double shift);
Tensor square(const Tensor& x);
Tensor minimum(const Tensor& a, const Tensor& b);
/// Sum over columns: (n×m) -> (n×1).
Tensor row_sum(const Tensor& x);
/// Mean of all entries -> 1×1.
Tensor mean(const Tensor& x);
Tensor sum(const Tensor& x);
Tensor concat_cols(const Tensor& a, const Tensor& b);
Tensor slice_cols(const Tensor& x, Eigen::Index start, Eigen::Index count);

/// Custom-gradient node for an elementwise function of several same-shaped
/// inputs. `value` is the precomputed output and `partials[k]` holds
/// ∂value/∂inputs[k] entry by entry; backward uses them verbatim.
Tensor elementwise(const std::vector<Tensor>& inputs, Matrix value, std::vector<Matrix> partials);

}  // namespace sacbeta::nn
