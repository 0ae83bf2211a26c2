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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sacbeta/neural/adam.hpp"
#include "sacbeta/neural/checkpoint.hpp"
#include "sacbeta/neural/mlp.hpp"
#include "sacbeta/neural/tensor.hpp"

using namespace sacbeta::nn;

namespace {

using Op = std::function<Tensor(Tape&, const std::vector<Tensor>&)>;

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng, double lo = -1.0,
                     double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

// Weighted sum of the op output with fixed random weights, so every output
// entry gets a distinct upstream gradient.
double scalar_loss(const Op& op, const std::vector<Matrix>& inputs, const Matrix* weights,
                   std::vector<Matrix>* grads) {
  Tape tape;
  std::vector<Tensor> vars;
  for (const Matrix& m : inputs) vars.push_back(tape.variable(m));
  Tensor out = op(tape, vars);
  Tensor w = tape.constant(weights ? *weights : Matrix::Ones(out.rows(), out.cols()));
  Tensor loss = sum(mul(out, w));
  const double value = loss.item();
  if (grads) {
    tape.backward(loss);
    grads->clear();
    for (const Tensor& v : vars) {
      grads->push_back(v.grad().size() ? v.grad() : Matrix::Zero(v.rows(), v.cols()));
    }
  }
  return value;
}

void expect_fd_match(const Op& op, const std::vector<Matrix>& inputs, double rtol = 1e-4) {
  std::mt19937_64 rng(99);
  Tape probe;
  std::vector<Tensor> pv;
  for (const Matrix& m : inputs) pv.push_back(probe.constant(m));
  const Tensor out = op(probe, pv);
  const Matrix weights = random_matrix(out.rows(), out.cols(), rng, 0.5, 1.5);

  std::vector<Matrix> grads;
  scalar_loss(op, inputs, &weights, &grads);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    for (Eigen::Index i = 0; i < inputs[k].size(); ++i) {
      std::vector<Matrix> plus = inputs;
      std::vector<Matrix> minus = inputs;
      const double h = 1e-6 * std::max(1.0, std::abs(inputs[k].data()[i]));
      plus[k].data()[i] += h;
      minus[k].data()[i] -= h;
      const double fd = (scalar_loss(op, plus, &weights, nullptr) - scalar_loss(op, minus, &weights, nullptr)) /
                        (2.0 * h);
      const double ad = grads[k].data()[i];
      EXPECT_NEAR(ad, fd, 1e-4 * std::max(1.0, std::abs(fd)) * (rtol / 1e-4))
          << "input " << k << " entry " << i;
    }
  }
}

// Values bounded away from zero so kinks (relu) stay out of the FD stencil.
Matrix away_from_zero(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  Matrix m = random_matrix(r, c, rng, 0.2, 1.5);
  std::bernoulli_distribution sign(0.5);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (sign(rng)) m.data()[i] = -m.data()[i];
  }
  return m;
}

}  // namespace

TEST(AutodiffFiniteDifference, Linear) {
  std::mt19937_64 rng(1);
  expect_fd_match([](Tape&, const std::vector<Tensor>& v) { return linear(v[0], v[1], v[2]); },
                  {random_matrix(4, 3, rng), random_matrix(3, 5, rng), random_matrix(1, 5, rng)});
}

TEST(AutodiffFiniteDifference, Matmul) {
  std::mt19937_64 rng(2);
  expect_fd_match([](Tape&, const std::vector<Tensor>& v) { return matmul(v[0], v[1]); },
                  {random_matrix(3, 4, rng), random_matrix(4, 2, rng)});
}

TEST(AutodiffFiniteDifference, Relu) {
  std::mt19937_64 rng(3);
  expect_fd_match([](Tape&, const std::vector<Tensor>& v) { return relu(v[0]); }, {away_from_zero(4, 3, rng)});
}

TEST(AutodiffFiniteDifference, Tanh) {
  std::mt19937_64 rng(4);
  expect_fd_match([](Tape&, const std::vector<Tensor>& v) { return sacbeta::nn::tanh(v[0]); },
                  {random_matrix(4, 3, rng, -2.0, 2.0)});
}

TEST(AutodiffFiniteDifference, AddSubMul) {
  std::mt19937_64 rng(5);
  const std::vector<Matrix> in{random_matrix(3, 3, rng), random_matrix(3, 3, rng)};
  expect_fd_match([](Tape&, const std::vector<Tensor>& v) { return add(v[0], v[1]); }, in);
  expect_fd_match([](Tape&, const std::vector<Tensor>& v) { return sub(v[0], v[1]); }, in);
  expect_fd_match([](Tape&, const std::vector<Tensor>& v) { return mul(v[0], v[1]); }, in);
}

TEST(AutodiffFiniteDifference, AffineAndSquare) {
  std::mt19937_64 rng(6);
  const std::vector<Matrix> in{random_matrix(2, 5, rng)};
  expect_fd_match([](Tape&, const std::vector<Tensor>& v) { return affine(v[0], -2.5, 0.75); }, in);
  expect_fd_match([](Tape&, const std::vector<Tensor>& v) { return square(v[0]); }, in);
}

TEST(AutodiffFiniteDifference, Minimum) {
  std::mt19937_64 rng(7);
  Matrix a = random_matrix(4, 2, rng);
  Matrix b = a + away_from_zero(4, 2, rng);  // no ties
  expect_fd_match([](Tape&, const std::vector<Tensor>& v) { return minimum(v[0], v[1]); }, {a, b});
}

TEST(AutodiffFiniteDifference, Reductions) {
  std::mt19937_64 rng(8);
  const std::vector<Matrix> in{random_matrix(4, 3, rng)};
  expect_fd_match([](Tape&, const std::vector<Tensor>& v) { return row_sum(v[0]); }, in);
  expect_fd_match([](Tape&, const std::vector<Tensor>& v) { return mean(v[0]); }, in);
  expect_fd_match([](Tape&, const std::vector<Tensor>& v) { return sum(v[0]); }, in);
}

TEST(AutodiffFiniteDifference, ConcatAndSlice) {
  std::mt19937_64 rng(9);
  expect_fd_match([](Tape&, const std::vector<Tensor>& v) { return concat_cols(v[0], v[1]); },
                  {random_matrix(3, 2, rng), random_matrix(3, 4, rng)});
  expect_fd_match([](Tape&, const std::vector<Tensor>& v) { return slice_cols(v[0], 1, 3); },
                  {random_matrix(3, 5, rng)});
}

TEST(AutodiffFiniteDifference, ElementwiseWithSuppliedPartials) {
  // f(x, y) = x·exp(y), partials supplied by hand.
  std::mt19937_64 rng(10);
  Op op = [](Tape&, const std::vector<Tensor>& v) {
    const Matrix& x = v[0].value();
    const Matrix& y = v[1].value();
    Matrix ey = y.array().exp().matrix();
    Matrix value = x.cwiseProduct(ey);
    return elementwise(v, value, {ey, value});
  };
  expect_fd_match(op, {random_matrix(3, 2, rng), random_matrix(3, 2, rng)});
}

TEST(AutodiffFiniteDifference, ComposedGraphWithReuse) {
  // A node feeding two consumers must accumulate both contributions.
  std::mt19937_64 rng(11);
  expect_fd_match(
      [](Tape&, const std::vector<Tensor>& v) {
        Tensor h = sacbeta::nn::tanh(linear(v[0], v[1], v[2]));
        return mul(h, add(h, affine(h, 3.0, 0.1)));
      },
      {random_matrix(3, 2, rng), random_matrix(2, 4, rng), random_matrix(1, 4, rng)});
}

TEST(Autodiff, SumOfWeightedInputGivesInputAsGradient) {
  Tape tape;
  Matrix xv(1, 3);
  xv << 1.5, -2.0, 0.25;
  Tensor w = tape.variable(Matrix::Constant(1, 3, 0.7));
  Tensor x = tape.constant(xv);
  Tensor loss = sum(mul(w, x));
  tape.backward(loss);
  EXPECT_EQ(w.grad(), xv);
}

TEST(Autodiff, ReluGradientIsZeroForNegativeInput) {
  Tape tape;
  Matrix xv(1, 2);
  xv << -0.5, 0.5;
  Tensor x = tape.variable(xv);
  tape.backward(sum(relu(x)));
  EXPECT_EQ(x.grad()(0, 0), 0.0);
  EXPECT_EQ(x.grad()(0, 1), 1.0);
}

TEST(Autodiff, ElementwiseUsesSuppliedJacobianVerbatim) {
  std::mt19937_64 rng(12);
  const Matrix xv = random_matrix(3, 3, rng);
  const Matrix weights = random_matrix(3, 3, rng);

  Tape pass;
  Tensor xp = pass.variable(xv);
  pass.backward(sum(mul(affine(xp, 1.0, 0.0), pass.constant(weights))));

  Tape custom;
  Tensor xc = custom.variable(xv);
  // Identity Jacobian with an unrelated value: gradients must not depend on it.
  Tensor y = elementwise({xc}, Matrix::Constant(3, 3, 42.0), {Matrix::Ones(3, 3)});
  custom.backward(sum(mul(y, custom.constant(weights))));
  EXPECT_EQ(xc.grad(), xp.grad());
}

TEST(Autodiff, SecondBackwardThrows) {
  Tape tape;
  Tensor x = tape.variable(Matrix::Ones(1, 1));
  Tensor loss = sum(square(x));
  tape.backward(loss);
  EXPECT_THROW(tape.backward(loss), TapeError);
}

TEST(Autodiff, NonScalarLossThrows) {
  Tape tape;
  Tensor x = tape.variable(Matrix::Ones(2, 2));
  EXPECT_THROW(tape.backward(square(x)), std::exception);
}

TEST(Autodiff, ShapeMismatchThrows) {
  Tape tape;
  Tensor a = tape.variable(Matrix::Ones(2, 3));
  Tensor b = tape.variable(Matrix::Ones(3, 2));
  EXPECT_THROW(add(a, b), ShapeError);
  EXPECT_THROW(matmul(a, a), ShapeError);
  EXPECT_THROW(slice_cols(a, 2, 2), ShapeError);
  EXPECT_THROW(elementwise({a}, Matrix::Ones(2, 3), {Matrix::Ones(3, 2)}), ShapeError);
}

TEST(Autodiff, CrossTapeInputsThrow) {
  Tape t1;
  Tape t2;
  Tensor a = t1.variable(Matrix::Ones(1, 1));
  Tensor b = t2.variable(Matrix::Ones(1, 1));
  EXPECT_THROW(add(a, b), std::exception);
}

TEST(Autodiff, FrozenParameterGetsNoGradient) {
  Parameter p("w", Matrix::Constant(1, 2, 2.0));
  Tape tape;
  Tensor w = tape.frozen(p);
  Tensor x = tape.variable(Matrix::Constant(1, 2, 3.0));
  tape.backward(sum(mul(w, x)));
  EXPECT_TRUE(p.grad.isZero());
  EXPECT_EQ(x.grad(), Matrix::Constant(1, 2, 2.0));
}

// ---------------------------------------------------------------------------

TEST(Mlp, ZeroWeightsGiveZeroOutput) {
  std::mt19937_64 rng(1);
  Mlp net("net", 3, {4, 4}, 2, rng);
  for (Parameter* p : net.parameters()) p->value.setZero();
  const Matrix out = net.infer(random_matrix(5, 3, rng));
  EXPECT_TRUE(out.isZero());
}

TEST(Mlp, SinglePathOfUnitWeightsIsReluChain) {
  std::mt19937_64 rng(1);
  Mlp net("net", 1, {1, 1}, 1, rng);
  for (Parameter* p : net.parameters()) {
    p->value.setZero();
    if (p->name.find("weight") != std::string::npos) p->value.setOnes();
  }
  Matrix x(3, 1);
  x << -2.0, 0.0, 1.75;
  const Matrix out = net.infer(x);
  EXPECT_EQ(out(0, 0), 0.0);
  EXPECT_EQ(out(1, 0), 0.0);
  EXPECT_EQ(out(2, 0), 1.75);
}

TEST(Mlp, ArchitectureAndInitRange) {
  std::mt19937_64 rng(3);
  Mlp net("q", 7, {256, 256}, 1, rng);
  const auto params = net.parameters();
  ASSERT_EQ(params.size(), 6u);
  const std::vector<std::pair<long, long>> shapes{{7, 256}, {1, 256}, {256, 256}, {1, 256}, {256, 1}, {1, 1}};
  const std::vector<double> fan_in{7, 7, 256, 256, 256, 256};
  for (std::size_t i = 0; i < params.size(); ++i) {
    EXPECT_EQ(params[i]->value.rows(), shapes[i].first);
    EXPECT_EQ(params[i]->value.cols(), shapes[i].second);
    EXPECT_LE(params[i]->value.cwiseAbs().maxCoeff(), 1.0 / std::sqrt(fan_in[i]));
  }
}

TEST(Mlp, ForwardMatchesInferAndIsDeterministic) {
  std::mt19937_64 rng(4);
  Mlp net("net", 3, {8, 8}, 2, rng);
  const Matrix x = random_matrix(6, 3, rng);
  Tape tape;
  Tensor out = net.forward(tape, tape.constant(x));
  EXPECT_EQ(out.value(), net.infer(x));
  EXPECT_EQ(net.infer(x), net.infer(x));
}

TEST(Mlp, WrongInputWidthThrows) {
  std::mt19937_64 rng(5);
  Mlp net("net", 3, {4, 4}, 2, rng);
  EXPECT_THROW(net.infer(Matrix::Ones(2, 4)), ShapeError);
  Tape tape;
  EXPECT_THROW(net.forward(tape, tape.constant(Matrix::Ones(2, 2))), ShapeError);
}

TEST(Mlp, WeightGradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(6);
  Mlp net("toy", 3, {4, 4}, 2, rng);
  const Matrix x = random_matrix(5, 3, rng);
  auto loss_value = [&] { return net.infer(x).sum(); };

  net.zero_grad();
  Tape tape;
  tape.backward(sum(net.forward(tape, tape.constant(x))));
  for (Parameter* p : net.parameters()) {
    for (Eigen::Index i = 0; i < p->value.size(); ++i) {
      const double saved = p->value.data()[i];
      const double h = 1e-6;
      p->value.data()[i] = saved + h;
      const double up = loss_value();
      p->value.data()[i] = saved - h;
      const double down = loss_value();
      p->value.data()[i] = saved;
      const double fd = (up - down) / (2.0 * h);
      EXPECT_NEAR(p->grad.data()[i], fd, 1e-4 * std::max(1.0, std::abs(fd))) << p->name << "[" << i << "]";
    }
  }
}

TEST(Mlp, ForwardFrozenPassesGradientToInputOnly) {
  std::mt19937_64 rng(7);
  Mlp net("net", 2, {4, 4}, 1, rng);
  net.zero_grad();
  Tape tape;
  Tensor x = tape.variable(random_matrix(3, 2, rng));
  tape.backward(sum(net.forward_frozen(tape, x)));
  for (const Parameter* p : net.parameters()) EXPECT_TRUE(p->grad.isZero());
  EXPECT_GT(x.grad().cwiseAbs().sum(), 0.0);
}

TEST(Mlp, PolyakAndCopy) {
  std::mt19937_64 rng(8);
  Mlp a("a", 2, {3}, 1, rng);
  Mlp b("b", 2, {3}, 1, rng);
  Mlp c = b;
  c.polyak_update(a, 0.25);
  const auto pa = a.parameters();
  const auto pb = b.parameters();
  const auto pc = c.parameters();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const Matrix expected = 0.75 * pb[i]->value + 0.25 * pa[i]->value;
    EXPECT_TRUE(pc[i]->value.isApprox(expected, 1e-15));
  }
  c.copy_from(a);
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(pc[i]->value, pa[i]->value);
}

// ---------------------------------------------------------------------------

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
  Parameter p("w", Matrix::Constant(2, 2, 0.3));
  Adam opt({&p});
  p.zero_grad();
  opt.step();
  EXPECT_EQ(p.value, Matrix::Constant(2, 2, 0.3));
}

TEST(Adam, FirstStepMovesByLearningRateAgainstGradientSign) {
  Matrix v(1, 3);
  v << 0.5, -0.5, 2.0;
  Parameter p("w", v);
  Adam opt({&p}, AdamOptions{});
  p.grad << 3.0, -0.01, 250.0;
  opt.step();
  const Matrix delta = p.value - v;
  EXPECT_NEAR(delta(0, 0), -1e-3, 1e-9);
  EXPECT_NEAR(delta(0, 1), 1e-3, 1e-8);
  EXPECT_NEAR(delta(0, 2), -1e-3, 1e-9);
  EXPECT_EQ(opt.step_count(), 1);
}

TEST(Adam, MatchesHandComputedUpdates) {
  Parameter p("w", Matrix::Constant(1, 1, 1.0));
  const AdamOptions o{0.1, 0.9, 0.999, 1e-8};
  Adam opt({&p}, o);
  double w = 1.0, m = 0.0, s = 0.0;
  for (int t = 1; t <= 5; ++t) {
    const double g = 2.0 * w;  // d/dw w²
    p.grad(0, 0) = 2.0 * p.value(0, 0);
    opt.step();
    m = o.beta1 * m + (1 - o.beta1) * g;
    s = o.beta2 * s + (1 - o.beta2) * g * g;
    const double mh = m / (1 - std::pow(o.beta1, t));
    const double sh = s / (1 - std::pow(o.beta2, t));
    w -= o.learning_rate * mh / (std::sqrt(sh) + o.epsilon);
    EXPECT_NEAR(p.value(0, 0), w, 1e-12);
  }
}

TEST(Adam, ThreeStepsOnSquareStrictlyDecrease) {
  Parameter p("w", Matrix::Constant(1, 1, 1.0));
  Adam opt({&p});
  double prev = 1.0;
  for (int i = 0; i < 3; ++i) {
    opt.zero_grad();
    Tape tape;
    Tensor w = tape.parameter(p);
    tape.backward(sum(square(w)));
    opt.step();
    const double f = p.value(0, 0) * p.value(0, 0);
    EXPECT_LT(f, prev);
    prev = f;
  }
}

TEST(Adam, GradientShapeMismatchThrows) {
  Parameter p("w", Matrix::Ones(2, 2));
  Adam opt({&p});
  p.grad = Matrix::Ones(1, 2);
  EXPECT_THROW(opt.step(), ShapeError);
}

// ---------------------------------------------------------------------------

class CheckpointTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("sacbeta_ckpt_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(CheckpointTest, RoundTripIsBitExact) {
  std::mt19937_64 rng(9);
  Mlp net("policy", 3, {5, 5}, 2, rng);
  const auto path = dir_ / "net.ckpt";
  save_checkpoint(path, std::as_const(net).parameters(), {{"init", "uniform_fan_in"}});
  const Checkpoint ckpt = load_checkpoint(path);
  EXPECT_EQ(ckpt.metadata.at("init"), "uniform_fan_in");

  std::mt19937_64 other(10);
  Mlp fresh("policy", 3, {5, 5}, 2, other);
  restore(ckpt, fresh.parameters());
  const auto a = std::as_const(net).parameters();
  const auto b = std::as_const(fresh).parameters();
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i]->value, b[i]->value);
}

TEST_F(CheckpointTest, CorruptOrMissingFilesThrow) {
  EXPECT_THROW(load_checkpoint(dir_ / "missing.ckpt"), CheckpointError);
  {
    std::ofstream os(dir_ / "junk.ckpt", std::ios::binary);
    os << "definitely not a checkpoint";
  }
  EXPECT_THROW(load_checkpoint(dir_ / "junk.ckpt"), CheckpointError);

  std::mt19937_64 rng(11);
  Mlp net("n", 2, {3}, 1, rng);
  const auto path = dir_ / "short.ckpt";
  save_checkpoint(path, std::as_const(net).parameters());
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 8);
  EXPECT_THROW(load_checkpoint(path), CheckpointError);
}

TEST_F(CheckpointTest, RestoreRejectsMissingOrMisshapenArrays) {
  std::mt19937_64 rng(12);
  Mlp small("n", 2, {3}, 1, rng);
  Mlp big("n", 2, {4}, 1, rng);
  Mlp renamed("m", 2, {3}, 1, rng);
  const auto path = dir_ / "small.ckpt";
  save_checkpoint(path, std::as_const(small).parameters());
  const Checkpoint ckpt = load_checkpoint(path);
  EXPECT_THROW(restore(ckpt, big.parameters()), std::exception);
  EXPECT_THROW(restore(ckpt, renamed.parameters()), CheckpointError);
}
