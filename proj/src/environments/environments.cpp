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

#include "sacbeta/environments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sacbeta::env {

double angle_normalize(double x) {
  constexpr double pi = std::numbers::pi;
  return std::fmod(std::fmod(x + pi, 2.0 * pi) + 2.0 * pi, 2.0 * pi) - pi;
}

Vector Environment::clip_action(const Vector& action) {
  if (static_cast<std::size_t>(action.size()) != spec().action_width) {
    throw std::invalid_argument("step: action width " + std::to_string(action.size()) + " != " +
                                std::to_string(spec().action_width));
  }
  Vector out(action.size());
  for (Eigen::Index i = 0; i < action.size(); ++i) {
    const double a = std::isnan(action(i)) ? 0.0 : action(i);
    out(i) = std::clamp(a, -1.0, 1.0);
    if (out(i) != action(i)) ++clipped_actions_;
  }
  return out;
}

// ---------------------------------------------------------------------------

PendulumSwingup::PendulumSwingup() : spec_{"pendulum", 3, 1, kMaxSteps} {}

Vector PendulumSwingup::reset(std::optional<std::uint64_t> seed) {
  if (seed) rng_.seed(*seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> speed(-1.0, 1.0);
  theta_ = angle(rng_);
  theta_dot_ = speed(rng_);
  steps_ = 0;
  return observe();
}

void PendulumSwingup::set_state(double theta, double theta_dot) {
  theta_ = theta;
  theta_dot_ = theta_dot;
  steps_ = 0;
}

Vector PendulumSwingup::observe() const {
  Vector obs(3);
  obs << std::cos(theta_), std::sin(theta_), theta_dot_;
  return obs;
}

StepResult PendulumSwingup::step(const Vector& action) {
  const double u = kMaxTorque * clip_action(action)(0);
  const double th = angle_normalize(theta_);
  const double cost = th * th + 0.1 * theta_dot_ * theta_dot_ + 0.001 * u * u;

  const double accel = 3.0 * kGravity / (2.0 * kLength) * std::sin(theta_) +
                       3.0 / (kMass * kLength * kLength) * u;
  theta_dot_ = std::clamp(theta_dot_ + accel * kDt, -kMaxSpeed, kMaxSpeed);
  theta_ += theta_dot_ * kDt;
  ++steps_;

  StepResult r;
  r.observation = observe();
  r.reward = -cost;
  r.truncated = steps_ >= kMaxSteps;
  return r;
}

// ---------------------------------------------------------------------------

PointReacher2D::PointReacher2D() : spec_{"reacher2d", 6, 2, kMaxSteps} {}

Vector PointReacher2D::reset(std::optional<std::uint64_t> seed) {
  if (seed) rng_.seed(*seed);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  position_ = {box(rng_), box(rng_)};
  goal_ = {box(rng_), box(rng_)};
  velocity_.setZero();
  steps_ = 0;
  return observe();
}

void PointReacher2D::set_state(const Eigen::Vector2d& position, const Eigen::Vector2d& velocity,
                               const Eigen::Vector2d& goal) {
  position_ = position;
  velocity_ = velocity;
  goal_ = goal;
  steps_ = 0;
}

Vector PointReacher2D::observe() const {
  Vector obs(6);
  obs << position_, velocity_, goal_;
  return obs;
}

StepResult PointReacher2D::step(const Vector& action) {
  const Vector a = clip_action(action);
  velocity_ += kMaxAccel * kDt * Eigen::Vector2d(a(0), a(1));
  velocity_ = velocity_.cwiseMax(-kMaxSpeed).cwiseMin(kMaxSpeed);
  position_ += kDt * velocity_;
  ++steps_;

  const double distance = (position_ - goal_).norm();
  StepResult r;
  r.observation = observe();
  r.reward = -distance - 0.01 * a.squaredNorm();
  r.terminal = distance < kGoalRadius;
  r.truncated = !r.terminal && steps_ >= kMaxSteps;
  return r;
}

std::unique_ptr<Environment> make_environment(std::string_view name) {
  if (name == "pendulum") return std::make_unique<PendulumSwingup>();
  if (name == "reacher2d") return std::make_unique<PointReacher2D>();
  throw std::invalid_argument("unknown environment '" + std::string(name) + "'");
}

}  // namespace sacbeta::env
