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

#include "sacbeta/neural/tensor.hpp"

#include <sstream>

namespace sacbeta::nn {
namespace {

std::string shape_str(const Matrix& m) {
  std::ostringstream os;
  os << "(" << m.rows() << "x" << m.cols() << ")";
  return os.str();
}

Tape& common_tape(const Tensor& a, const Tensor& b) {
  if (a.tape() == nullptr || a.tape() != b.tape()) {
    throw TapeError("tensors belong to different tapes");
  }
  return *a.tape();
}

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a.value()) + " vs " +
                     shape_str(b.value()));
  }
}

}  // namespace

const Matrix& Tensor::value() const {
  if (tape_ == nullptr) throw TapeError("tensor is not attached to a tape");
  return tape_->value(id_);
}

const Matrix& Tensor::grad() const { return tape_->grad(id_); }
bool Tensor::requires_grad() const { return tape_->requires_grad(id_); }

double Tensor::item() const {
  const Matrix& v = value();
  if (v.size() != 1) throw ShapeError("item() on a non-scalar tensor " + shape_str(v));
  return v(0, 0);
}

const Matrix& Tape::value(std::size_t id) const {
  const Node& n = nodes_.at(id);
  return n.external != nullptr ? *n.external : n.owned;
}

Tensor Tape::push(Node node) {
  if (consumed_) throw TapeError("cannot record on a consumed tape");
  nodes_.push_back(std::move(node));
  return Tensor(this, nodes_.size() - 1);
}

Tensor Tape::constant(Matrix value) {
  Node n;
  n.owned = std::move(value);
  return push(std::move(n));
}

Tensor Tape::variable(Matrix value) {
  Node n;
  n.owned = std::move(value);
  n.requires_grad = true;
  return push(std::move(n));
}

Tensor Tape::parameter(Parameter& param) {
  Node n;
  n.external = &param.value;
  n.requires_grad = true;
  n.param = &param;
  return push(std::move(n));
}

Tensor Tape::frozen(const Parameter& param) {
  Node n;
  n.external = &param.value;
  return push(std::move(n));
}

Tensor Tape::record(Matrix value, std::vector<Tensor> inputs, Backward backward) {
  Node n;
  n.owned = std::move(value);
  for (const Tensor& t : inputs) {
    if (t.tape_ != this) throw TapeError("input recorded on a different tape");
    n.requires_grad = n.requires_grad || nodes_[t.id_].requires_grad;
  }
  if (n.requires_grad) n.backward = std::move(backward);
  return push(std::move(n));
}

void Tape::backward(const Tensor& loss) {
  if (consumed_) throw TapeError("backward called twice on the same tape");
  if (loss.tape_ != this) throw TapeError("loss recorded on a different tape");
  if (value(loss.id_).size() != 1) throw ShapeError("backward requires a scalar loss");
  consumed_ = true;
  if (!nodes_[loss.id_].requires_grad) return;

  nodes_[loss.id_].grad = Matrix::Ones(1, 1);
  for (std::size_t i = loss.id_ + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || n.grad.size() == 0) continue;
    if (n.backward) n.backward(*this, n.grad);
    if (n.param != nullptr) {
      if (n.param->grad.rows() != n.grad.rows() || n.param->grad.cols() != n.grad.cols()) {
        n.param->grad = n.grad;
      } else {
        n.param->grad += n.grad;
      }
    }
  }
}

// ---------------------------------------------------------------------------

Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  Tape& tape = common_tape(x, weight);
  common_tape(x, bias);
  const Matrix& xv = x.value();
  const Matrix& wv = weight.value();
  const Matrix& bv = bias.value();
  if (xv.cols() != wv.rows() || bv.rows() != 1 || bv.cols() != wv.cols()) {
    throw ShapeError("linear: x" + shape_str(xv) + " W" + shape_str(wv) + " b" + shape_str(bv));
  }
  Matrix out(xv.rows(), wv.cols());
  out.noalias() = xv * wv;
  out.rowwise() += bv.row(0);
  return tape.record(std::move(out), {x, weight, bias}, [x, weight, bias](Tape& t, const Matrix& g) {
    if (x.requires_grad()) t.accumulate(x, g * weight.value().transpose());
    if (weight.requires_grad()) t.accumulate(weight, x.value().transpose() * g);
    if (bias.requires_grad()) t.accumulate(bias, g.colwise().sum());
  });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  Tape& tape = common_tape(a, b);
  if (a.cols() != b.rows()) throw ShapeError("matmul: " + shape_str(a.value()) + " x " + shape_str(b.value()));
  Matrix out = a.value() * b.value();
  return tape.record(std::move(out), {a, b}, [a, b](Tape& t, const Matrix& g) {
    if (a.requires_grad()) t.accumulate(a, g * b.value().transpose());
    if (b.requires_grad()) t.accumulate(b, a.value().transpose() * g);
  });
}

Tensor relu(const Tensor& x) {
  Matrix out = x.value().cwiseMax(0.0);
  return x.tape()->record(std::move(out), {x}, [x](Tape& t, const Matrix& g) {
    t.accumulate(x, (x.value().array() > 0.0).select(g.array(), 0.0).matrix());
  });
}

Tensor tanh(const Tensor& x) {
  Matrix out = x.value().array().tanh().matrix();
  return x.tape()->record(out, {x}, [x, out](Tape& t, const Matrix& g) {
    t.accumulate(x, (g.array() * (1.0 - out.array().square())).matrix());
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  Tape& tape = common_tape(a, b);
  require_same_shape("add", a, b);
  return tape.record(a.value() + b.value(), {a, b}, [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a, g);
    t.accumulate(b, g);
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  Tape& tape = common_tape(a, b);
  require_same_shape("sub", a, b);
  return tape.record(a.value() - b.value(), {a, b}, [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a, g);
    t.accumulate(b, -g);
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  Tape& tape = common_tape(a, b);
  require_same_shape("mul", a, b);
  Matrix out = a.value().cwiseProduct(b.value());
  return tape.record(std::move(out), {a, b}, [a, b](Tape& t, const Matrix& g) {
    if (a.requires_grad()) t.accumulate(a, g.cwiseProduct(b.value()));
    if (b.requires_grad()) t.accumulate(b, g.cwiseProduct(a.value()));
  });
}

Tensor affine(const Tensor& x, double scale, double shift) {
  Matrix out = (scale * x.value().array() + shift).matrix();
  return x.tape()->record(std::move(out), {x}, [x, scale](Tape& t, const Matrix& g) {
    t.accumulate(x, scale * g);
  });
}

Tensor square(const Tensor& x) {
  Matrix out = x.value().array().square().matrix();
  return x.tape()->record(std::move(out), {x}, [x](Tape& t, const Matrix& g) {
    t.accumulate(x, 2.0 * g.cwiseProduct(x.value()));
  });
}

Tensor minimum(const Tensor& a, const Tensor& b) {
  Tape& tape = common_tape(a, b);
  require_same_shape("minimum", a, b);
  Matrix out = a.value().cwiseMin(b.value());
  return tape.record(std::move(out), {a, b}, [a, b](Tape& t, const Matrix& g) {
    // Ties route the gradient to the first argument.
    const auto pick_a = (a.value().array() <= b.value().array());
    if (a.requires_grad()) t.accumulate(a, pick_a.select(g.array(), 0.0).matrix());
    if (b.requires_grad()) t.accumulate(b, pick_a.select(0.0, g.array()).matrix());
  });
}

Tensor row_sum(const Tensor& x) {
  Matrix out = x.value().rowwise().sum();
  const Eigen::Index cols = x.cols();
  return x.tape()->record(std::move(out), {x}, [x, cols](Tape& t, const Matrix& g) {
    t.accumulate(x, g.replicate(1, cols));
  });
}

Tensor sum(const Tensor& x) {
  Matrix out(1, 1);
  out(0, 0) = x.value().sum();
  const auto r = x.rows();
  const auto c = x.cols();
  return x.tape()->record(std::move(out), {x}, [x, r, c](Tape& t, const Matrix& g) {
    t.accumulate(x, Matrix::Constant(r, c, g(0, 0)));
  });
}

Tensor mean(const Tensor& x) {
  const double n = static_cast<double>(x.value().size());
  if (n == 0) throw ShapeError("mean of an empty tensor");
  Matrix out(1, 1);
  out(0, 0) = x.value().sum() / n;
  const auto r = x.rows();
  const auto c = x.cols();
  return x.tape()->record(std::move(out), {x}, [x, r, c, n](Tape& t, const Matrix& g) {
    t.accumulate(x, Matrix::Constant(r, c, g(0, 0) / n));
  });
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  Tape& tape = common_tape(a, b);
  if (a.rows() != b.rows()) throw ShapeError("concat_cols: row counts differ");
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a.value(), b.value();
  const auto ac = a.cols();
  const auto bc = b.cols();
  return tape.record(std::move(out), {a, b}, [a, b, ac, bc](Tape& t, const Matrix& g) {
    if (a.requires_grad()) t.accumulate(a, g.leftCols(ac));
    if (b.requires_grad()) t.accumulate(b, g.rightCols(bc));
  });
}

Tensor slice_cols(const Tensor& x, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > x.cols()) {
    throw ShapeError("slice_cols: range outside " + shape_str(x.value()));
  }
  Matrix out = x.value().middleCols(start, count);
  const auto r = x.rows();
  const auto c = x.cols();
  return x.tape()->record(std::move(out), {x}, [x, start, count, r, c](Tape& t, const Matrix& g) {
    Matrix full = Matrix::Zero(r, c);
    full.middleCols(start, count) = g;
    t.accumulate(x, full);
  });
}

Tensor elementwise(const std::vector<Tensor>& inputs, Matrix value, std::vector<Matrix> partials) {
  if (inputs.empty() || inputs.size() != partials.size()) {
    throw ShapeError("elementwise: need one partial matrix per input");
  }
  Tape* tape = inputs.front().tape();
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (inputs[k].tape() != tape) throw TapeError("elementwise: inputs on different tapes");
    if (inputs[k].rows() != value.rows() || inputs[k].cols() != value.cols() ||
        partials[k].rows() != value.rows() || partials[k].cols() != value.cols()) {
      throw ShapeError("elementwise: inputs, partials and value must share a shape");
    }
  }
  return tape->record(std::move(value), inputs,
                      [inputs, partials = std::move(partials)](Tape& t, const Matrix& g) {
                        for (std::size_t k = 0; k < inputs.size(); ++k) {
                          if (inputs[k].requires_grad()) t.accumulate(inputs[k], g.cwiseProduct(partials[k]));
                        }
                      });
}

}  // namespace sacbeta::nn
