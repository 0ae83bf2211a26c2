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

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "sacbeta/neural/adam.hpp"
#include "sacbeta/neural/mlp.hpp"
#include "sacbeta/sac/policy.hpp"
#include "sacbeta/sac/replay_buffer.hpp"

namespace sacbeta::sac {

struct SacOptions {
  double discount = 0.99;
  double tau = 0.005;
  double temperature = 0.2;
  double learning_rate = 1e-3;
  std::size_t batch_size = 256;
  std::vector<std::size_t> hidden{256, 256};
  PolicyConfig policy;
};

/// r + γ(1 - terminal)(min(q1, q2) - temperature·log π). All arguments are
/// per-transition columns of equal length.
Vector soft_td_target(const Vector& rewards, const Vector& terminals, const Vector& q1, const Vector& q2,
                      const Vector& next_log_prob, double discount, double temperature);

/// Q(states, actions) recorded on a tape; returns n × 1.
using CriticFn = std::function<nn::Tensor(nn::Tape&, const nn::Tensor& states, const nn::Tensor& actions)>;

/// mean(temperature·log π(ã|s) - critic(s, ã)) with ã drawn pathwise from the
/// policy. Descending this ascends the entropy-augmented objective.
nn::Tensor actor_loss(Policy& policy, nn::Tape& tape, const nn::Matrix& states, const CriticFn& critic,
                      double temperature, dist::NoiseSource& noise);

class SacAgent {
 public:
  /// All randomness (initial weights and the policy's sampling noise) is
  /// derived from `seed`.
  SacAgent(std::size_t state_width, std::size_t action_width, SacOptions options, std::uint64_t seed);
  SacAgent(const SacAgent&) = delete;
  SacAgent& operator=(const SacAgent&) = delete;

  /// Soft TD targets for a batch, with next actions drawn from the current
  /// policy. Nothing is recorded for differentiation.
  Vector critic_target(const Batch& batch);
  /// One Adam step on each critic toward the same targets. Returns both
  /// mean squared errors (before the step).
  std::pair<double, double> critic_update(const Batch& batch);
  /// One Adam step on the policy; critic weights stay fixed. Returns the loss.
  double actor_update(const Batch& batch);
  /// Polyak-averages the online critics into the targets.
  void target_update();

  /// Stochastic action in [-1, 1]^d for acting in the environment.
  Vector act(const Vector& state);
  /// Distribution mean in [-1, 1]^d.
  Vector act_deterministic(const Vector& state) const;

  /// Q value of (state, critic action) rows under an online critic (0 or 1).
  Vector q_value(int which, const nn::Matrix& states, const nn::Matrix& actions) const;

  bool all_finite() const;

  const SacOptions& options() const { return options_; }
  void set_temperature(double t) { options_.temperature = t; }
  void set_discount(double g) { options_.discount = g; }
  void set_tau(double tau) { options_.tau = tau; }

  Policy& policy() { return policy_; }
  const Policy& policy() const { return policy_; }
  nn::Mlp& q1() { return q1_; }
  nn::Mlp& q2() { return q2_; }
  nn::Mlp& q1_target() { return q1_target_; }
  nn::Mlp& q2_target() { return q2_target_; }
  const nn::Mlp& q1() const { return q1_; }
  const nn::Mlp& q2() const { return q2_; }
  const nn::Mlp& q1_target() const { return q1_target_; }
  const nn::Mlp& q2_target() const { return q2_target_; }
  dist::NoiseSource& noise() { return noise_; }

 private:
  SacOptions options_;
  std::mt19937_64 init_rng_;
  std::mt19937_64 noise_rng_;
  dist::RngNoise noise_;
  Policy policy_;
  nn::Mlp q1_, q2_, q1_target_, q2_target_;
  nn::Adam policy_opt_, q1_opt_, q2_opt_;
};

/// splitmix64 of seed + stream; used to derive independent seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace sacbeta::sac
