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
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "sacbeta/environments.hpp"

using namespace sacbeta::env;

namespace {

Vector zeros(Eigen::Index n) { return Vector::Zero(n); }

Vector random_action(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector a(n);
  for (Eigen::Index i = 0; i < n; ++i) a(i) = u(rng);
  return a;
}

}  // namespace

class BothEnvironments : public ::testing::TestWithParam<const char*> {};

TEST_P(BothEnvironments, SameSeedSameObservation) {
  auto a = make_environment(GetParam());
  auto b = make_environment(GetParam());
  EXPECT_EQ(a->reset(17), b->reset(17));
  EXPECT_EQ(a->reset(17), a->reset(17));
  EXPECT_NE(a->reset(17), a->reset(18));
}

TEST_P(BothEnvironments, ObservationWidthMatchesSpec) {
  auto env = make_environment(GetParam());
  const Vector obs = env->reset(1);
  EXPECT_EQ(static_cast<std::size_t>(obs.size()), env->spec().observation_width);
  const StepResult r = env->step(zeros(static_cast<Eigen::Index>(env->spec().action_width)));
  EXPECT_EQ(static_cast<std::size_t>(r.observation.size()), env->spec().observation_width);
}

TEST_P(BothEnvironments, TrajectoriesAreBitIdenticalForSeedAndActions) {
  auto a = make_environment(GetParam());
  auto b = make_environment(GetParam());
  const auto d = static_cast<Eigen::Index>(a->spec().action_width);
  std::mt19937_64 rng(5);
  a->reset(3);
  b->reset(3);
  for (int t = 0; t < 1000; ++t) {
    const Vector act = random_action(rng, d);
    StepResult ra = a->step(act);
    StepResult rb = b->step(act);
    ASSERT_EQ(ra.observation, rb.observation);
    ASSERT_EQ(ra.reward, rb.reward);
    ASSERT_EQ(ra.terminal, rb.terminal);
    ASSERT_EQ(ra.truncated, rb.truncated);
    if (ra.terminal || ra.truncated) {
      a->reset();
      b->reset();
    }
  }
}

TEST_P(BothEnvironments, FiniteOverManyRandomStepsAndTruncationNeverTerminal) {
  auto env = make_environment(GetParam());
  const auto d = static_cast<Eigen::Index>(env->spec().action_width);
  std::mt19937_64 rng(11);
  env->reset(11);
  std::size_t truncations = 0;
  for (int t = 0; t < 100000; ++t) {
    const StepResult r = env->step(random_action(rng, d));
    ASSERT_TRUE(r.observation.allFinite());
    ASSERT_TRUE(std::isfinite(r.reward));
    ASSERT_FALSE(r.terminal && r.truncated);
    ASSERT_LE(env->steps_in_episode(), env->spec().max_episode_steps);
    if (r.truncated) {
      ++truncations;
      EXPECT_EQ(env->steps_in_episode(), env->spec().max_episode_steps);
    }
    if (r.terminal || r.truncated) env->reset();
  }
  EXPECT_GT(truncations, 0u);
}

TEST_P(BothEnvironments, OutOfBoundsActionsAreClippedAndCounted) {
  auto a = make_environment(GetParam());
  auto b = make_environment(GetParam());
  const auto d = static_cast<Eigen::Index>(a->spec().action_width);
  a->reset(2);
  b->reset(2);
  const StepResult big = a->step(Vector::Constant(d, 5.0));
  const StepResult one = b->step(Vector::Constant(d, 1.0));
  EXPECT_EQ(big.observation, one.observation);
  EXPECT_EQ(big.reward, one.reward);
  EXPECT_EQ(a->clipped_actions(), static_cast<std::size_t>(d));
  EXPECT_EQ(b->clipped_actions(), 0u);
  EXPECT_THROW(a->step(Vector::Zero(d + 1)), std::invalid_argument);
}

INSTANTIATE_TEST_SUITE_P(Envs, BothEnvironments, ::testing::Values("pendulum", "reacher2d"));

TEST(Environment, UnknownNameThrows) { EXPECT_THROW(make_environment("ant"), std::invalid_argument); }

TEST(Pendulum, SpecMatchesTask) {
  PendulumSwingup env;
  EXPECT_EQ(env.spec().observation_width, 3u);
  EXPECT_EQ(env.spec().action_width, 1u);
  EXPECT_EQ(env.spec().max_episode_steps, 200u);
}

TEST(Pendulum, ResetAngleMeanWithinThreeStandardErrors) {
  PendulumSwingup env;
  const int n = 10000;
  double sum = 0.0;
  env.reset(2024);
  for (int i = 0; i < n; ++i) {
    env.reset();
    EXPECT_GE(env.theta(), -std::numbers::pi);
    EXPECT_LE(env.theta(), std::numbers::pi);
    sum += env.theta();
  }
  // Uniform on [-π, π] has standard deviation π/√3.
  const double se = std::numbers::pi / std::sqrt(3.0) / std::sqrt(static_cast<double>(n));
  EXPECT_LT(std::abs(sum / n), 3.0 * se);
}

TEST(Pendulum, UprightAtRestHasZeroReward) {
  PendulumSwingup env;
  env.set_state(0.0, 0.0);
  const StepResult r = env.step(zeros(1));
  EXPECT_EQ(r.reward, 0.0);
  EXPECT_FALSE(r.terminal);
}

TEST(Pendulum, OnlyFixedPointsOfSineStayPut) {
  for (double theta : {0.0, std::numbers::pi}) {
    PendulumSwingup env;
    env.set_state(theta, 0.0);
    env.step(zeros(1));
    EXPECT_EQ(env.theta(), theta);
  }
  for (double theta : {0.5, std::numbers::pi / 2, -2.0}) {
    PendulumSwingup env;
    env.set_state(theta, 0.0);
    env.step(zeros(1));
    EXPECT_NE(env.theta(), theta);
  }
}

TEST(Pendulum, DynamicsMatchHandComputedTick) {
  PendulumSwingup env;
  env.set_state(1.0, 0.5);
  Vector a(1);
  a << 0.4;
  const StepResult r = env.step(a);
  const double u = 0.8;
  const double td = 0.5 + (15.0 * std::sin(1.0) + 3.0 * u) * 0.05;
  EXPECT_DOUBLE_EQ(env.theta_dot(), td);
  EXPECT_DOUBLE_EQ(env.theta(), 1.0 + td * 0.05);
  EXPECT_DOUBLE_EQ(r.reward, -(1.0 + 0.1 * 0.25 + 0.001 * u * u));
  EXPECT_DOUBLE_EQ(r.observation(0), std::cos(env.theta()));
  EXPECT_DOUBLE_EQ(r.observation(1), std::sin(env.theta()));
}

TEST(Pendulum, RewardStaysWithinBounds) {
  const double lower = -(std::numbers::pi * std::numbers::pi + 0.1 * 64.0 + 0.001 * 4.0);
  PendulumSwingup env;
  env.reset(8);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20000; ++t) {
    const StepResult r = env.step(random_action(rng, 1));
    ASSERT_LE(r.reward, 0.0);
    ASSERT_GE(r.reward, lower);
    ASSERT_LE(std::abs(env.theta_dot()), 8.0);
    ASSERT_FALSE(r.terminal);
    if (r.truncated) env.reset();
  }
}

TEST(Pendulum, TruncatesAtTwoHundredSteps) {
  PendulumSwingup env;
  env.reset(1);
  for (int t = 1; t <= 200; ++t) {
    const StepResult r = env.step(zeros(1));
    EXPECT_EQ(r.truncated, t == 200);
    EXPECT_FALSE(r.terminal);
  }
}

TEST(Reacher, StartingAtGoalTerminatesImmediately) {
  PointReacher2D env;
  env.set_state({0.3, -0.2}, {0.0, 0.0}, {0.3, -0.2});
  const StepResult r = env.step(zeros(2));
  EXPECT_TRUE(r.terminal);
  EXPECT_FALSE(r.truncated);
  EXPECT_NEAR(r.reward, 0.0, 1e-12);
}

TEST(Reacher, RewardIsNegativeDistanceMinusActionCost) {
  PointReacher2D env;
  env.set_state({0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0});
  Vector a(2);
  a << 0.5, -1.0;
  const StepResult r = env.step(a);
  // v = 2·0.05·a, p = 0.05·v.
  const Eigen::Vector2d p(0.05 * 0.1 * 0.5, 0.05 * 0.1 * -1.0);
  EXPECT_DOUBLE_EQ(r.reward, -(p - Eigen::Vector2d(1.0, 0.0)).norm() - 0.01 * 1.25);
  EXPECT_FALSE(r.terminal);
}

TEST(Reacher, TruncatesAtThreeHundredStepsWithoutTerminal) {
  PointReacher2D env;
  env.set_state({0.0, 0.0}, {0.0, 0.0}, {1.0, 1.0});
  for (int t = 1; t <= 300; ++t) {
    const StepResult r = env.step(zeros(2));
    EXPECT_FALSE(r.terminal);
    EXPECT_EQ(r.truncated, t == 300);
  }
}
