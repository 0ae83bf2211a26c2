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

#include "sacbeta/sac/agent.hpp"

#include <stdexcept>

namespace sacbeta::sac {

using nn::Matrix;
using nn::Tape;
using nn::Tensor;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + stream * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Vector soft_td_target(const Vector& rewards, const Vector& terminals, const Vector& q1, const Vector& q2,
                      const Vector& next_log_prob, double discount, double temperature) {
  const auto n = rewards.size();
  if (terminals.size() != n || q1.size() != n || q2.size() != n || next_log_prob.size() != n) {
    throw std::invalid_argument("soft_td_target: column lengths differ");
  }
  const Vector soft = q1.cwiseMin(q2) - temperature * next_log_prob;
  return rewards.array() + discount * (1.0 - terminals.array()) * soft.array();
}

Tensor actor_loss(Policy& policy, Tape& tape, const Matrix& states, const CriticFn& critic,
                  double temperature, dist::NoiseSource& noise) {
  const Policy::Sample s = policy.rsample(tape, states, noise);
  const Tensor q = critic(tape, tape.constant(states), s.action);
  return nn::mean(nn::sub(nn::affine(s.log_prob, temperature, 0.0), q));
}

namespace {

Matrix critic_input(const Matrix& states, const Matrix& actions) {
  Matrix x(states.rows(), states.cols() + actions.cols());
  x << states, actions;
  return x;
}

nn::AdamOptions adam_options(double lr) {
  nn::AdamOptions o;
  o.learning_rate = lr;
  return o;
}

}  // namespace

SacAgent::SacAgent(std::size_t state_width, std::size_t action_width, SacOptions options, std::uint64_t seed)
    : options_(std::move(options)),
      init_rng_(derive_seed(seed, 0)),
      noise_rng_(derive_seed(seed, 1)),
      noise_(noise_rng_),
      policy_(state_width, action_width, options_.hidden, options_.policy, init_rng_),
      q1_("q1", state_width + action_width, options_.hidden, 1, init_rng_),
      q2_("q2", state_width + action_width, options_.hidden, 1, init_rng_),
      q1_target_(q1_),
      q2_target_(q2_),
      policy_opt_(policy_.network().parameters(), adam_options(options_.learning_rate)),
      q1_opt_(q1_.parameters(), adam_options(options_.learning_rate)),
      q2_opt_(q2_.parameters(), adam_options(options_.learning_rate)) {
  if (options_.batch_size == 0) throw std::invalid_argument("SacAgent: batch size must be positive");
}

Vector SacAgent::critic_target(const Batch& batch) {
  const Policy::Draw next = policy_.sample(batch.next_states, noise_);
  const Matrix x = critic_input(batch.next_states, next.action);
  const Vector t1 = q1_target_.infer(x).col(0);
  const Vector t2 = q2_target_.infer(x).col(0);
  return soft_td_target(batch.rewards, batch.terminals, t1, t2, next.log_prob, options_.discount,
                        options_.temperature);
}

std::pair<double, double> SacAgent::critic_update(const Batch& batch) {
  const Vector y = critic_target(batch);
  const Matrix x = critic_input(batch.states, batch.actions);
  Matrix ycol = y;
  double losses[2];
  nn::Mlp* nets[2] = {&q1_, &q2_};
  nn::Adam* opts[2] = {&q1_opt_, &q2_opt_};
  for (int k = 0; k < 2; ++k) {
    Tape tape;
    const Tensor pred = nets[k]->forward(tape, tape.constant(x));
    const Tensor loss = nn::mean(nn::square(nn::sub(pred, tape.constant(ycol))));
    opts[k]->zero_grad();
    tape.backward(loss);
    opts[k]->step();
    losses[k] = loss.item();
  }
  return {losses[0], losses[1]};
}

double SacAgent::actor_update(const Batch& batch) {
  Tape tape;
  const CriticFn critic = [this](Tape& t, const Tensor& s, const Tensor& a) {
    const Tensor x = nn::concat_cols(s, a);
    return nn::minimum(q1_.forward_frozen(t, x), q2_.forward_frozen(t, x));
  };
  const Tensor loss = actor_loss(policy_, tape, batch.states, critic, options_.temperature, noise_);
  policy_opt_.zero_grad();
  tape.backward(loss);
  policy_opt_.step();
  return loss.item();
}

void SacAgent::target_update() {
  q1_target_.polyak_update(q1_, options_.tau);
  q2_target_.polyak_update(q2_, options_.tau);
}

Vector SacAgent::act(const Vector& state) {
  const Matrix s = state.transpose();
  return Policy::to_env_action(policy_.sample(s, noise_).action).row(0).transpose();
}

Vector SacAgent::act_deterministic(const Vector& state) const {
  const Matrix s = state.transpose();
  return policy_.mean_action(s).row(0).transpose();
}

Vector SacAgent::q_value(int which, const Matrix& states, const Matrix& actions) const {
  const nn::Mlp& q = which == 0 ? q1_ : q2_;
  return q.infer(critic_input(states, actions)).col(0);
}

bool SacAgent::all_finite() const {
  return policy_.network().all_finite() && q1_.all_finite() && q2_.all_finite() && q1_target_.all_finite() &&
         q2_target_.all_finite();
}

}  // namespace sacbeta::sac
