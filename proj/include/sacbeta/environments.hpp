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
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace sacbeta::env {

using Vector = Eigen::VectorXd;

/// Actions are always bounded to [-1, 1] per dimension.
struct EnvSpec {
  std::string name;
  std::size_t observation_width = 0;
  std::size_t action_width = 0;
  std::size_t max_episode_steps = 0;
};

struct StepResult {
  Vector observation;
  double reward = 0.0;
  bool terminal = false;   // the task ended; no bootstrapping past this step
  bool truncated = false;  // the episode hit its time limit
};

class Environment {
 public:
  virtual ~Environment() = default;

  virtual const EnvSpec& spec() const = 0;
  /// Starts a new episode. Passing a seed reseeds the environment RNG;
  /// otherwise the existing stream continues.
  virtual Vector reset(std::optional<std::uint64_t> seed = std::nullopt) = 0;
  /// Advances one tick. Out-of-bounds action components are clipped to
  /// [-1, 1] and counted in clipped_actions().
  virtual StepResult step(const Vector& action) = 0;

  std::size_t clipped_actions() const { return clipped_actions_; }
  std::size_t steps_in_episode() const { return steps_; }

 protected:
  Vector clip_action(const Vector& action);

  std::size_t clipped_actions_ = 0;
  std::size_t steps_ = 0;
};

/// Torque-limited pendulum swing-up. θ = 0 is upright.
class PendulumSwingup final : public Environment {
 public:
  static constexpr double kGravity = 10.0;
  static constexpr double kMass = 1.0;
  static constexpr double kLength = 1.0;
  static constexpr double kMaxTorque = 2.0;
  static constexpr double kMaxSpeed = 8.0;
  static constexpr double kDt = 0.05;
  static constexpr std::size_t kMaxSteps = 200;

  PendulumSwingup();

  const EnvSpec& spec() const override { return spec_; }
  Vector reset(std::optional<std::uint64_t> seed = std::nullopt) override;
  StepResult step(const Vector& action) override;

  void set_state(double theta, double theta_dot);
  double theta() const { return theta_; }
  double theta_dot() const { return theta_dot_; }

 private:
  Vector observe() const;

  EnvSpec spec_;
  std::mt19937_64 rng_;
  double theta_ = 0.0;
  double theta_dot_ = 0.0;
};

/// Point mass on the plane driven by an acceleration command toward a goal.
class PointReacher2D final : public Environment {
 public:
  static constexpr double kDt = 0.05;
  static constexpr double kMaxAccel = 2.0;
  static constexpr double kMaxSpeed = 2.0;
  static constexpr double kGoalRadius = 0.05;
  static constexpr std::size_t kMaxSteps = 300;

  PointReacher2D();

  const EnvSpec& spec() const override { return spec_; }
  Vector reset(std::optional<std::uint64_t> seed = std::nullopt) override;
  StepResult step(const Vector& action) override;

  void set_state(const Eigen::Vector2d& position, const Eigen::Vector2d& velocity,
                 const Eigen::Vector2d& goal);

 private:
  Vector observe() const;

  EnvSpec spec_;
  std::mt19937_64 rng_;
  Eigen::Vector2d position_ = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity_ = Eigen::Vector2d::Zero();
  Eigen::Vector2d goal_ = Eigen::Vector2d::Zero();
};

/// Wraps an angle into [-π, π).
double angle_normalize(double x);

/// "pendulum" or "reacher2d".
std::unique_ptr<Environment> make_environment(std::string_view name);

}  // namespace sacbeta::env
