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
#include <vector>

#include "sacbeta/distributions.hpp"
#include "sacbeta/neural/mlp.hpp"

namespace sacbeta::sac {

struct PolicyConfig {
  dist::Family family = dist::Family::Beta;
  dist::EstimatorKind estimator = dist::EstimatorKind::ImplicitAD;
  dist::BetaOptions beta;         // clip / shift / concentration map
  dist::ParamClip log_std_clip;   // normal families
};

/// Stochastic policy: an MLP emitting 2·d raw distribution parameters per
/// state (mean and log std, or the two log shifted concentrations).
///
/// "Critic actions" are what the Q networks consume: the mapped beta sample
/// in [-1, 1], tanh(u) for the squashed normal, and the raw sample u for the
/// plain normal. "Env actions" additionally clip to [-1, 1].
class Policy {
 public:
  Policy(std::size_t state_width, std::size_t action_width, std::vector<std::size_t> hidden,
         PolicyConfig config, std::mt19937_64& rng);

  struct Sample {
    nn::Tensor raw;       // n × 2d network output
    nn::Tensor action;    // n × d critic action
    nn::Tensor log_prob;  // n × 1 joint log density of the action
  };

  /// Differentiable draw. Gradients reach the policy parameters through the
  /// pathwise Jacobian of the sample and through the log density's direct
  /// parameter dependence.
  Sample rsample(nn::Tape& tape, const nn::Matrix& states, dist::NoiseSource& noise);

  struct Draw {
    nn::Matrix raw;
    nn::Matrix action;
    Eigen::VectorXd log_prob;
  };

  /// Draw without recording anything (critic targets, acting).
  Draw sample(const nn::Matrix& states, dist::NoiseSource& noise) const;

  /// Distribution mean mapped to the environment's action space.
  nn::Matrix mean_action(const nn::Matrix& states) const;

  /// Clip to [-1, 1]; the identity for the bounded families.
  static nn::Matrix to_env_action(const nn::Matrix& critic_action);

  const PolicyConfig& config() const { return config_; }
  std::size_t action_width() const { return action_width_; }
  nn::Mlp& network() { return net_; }
  const nn::Mlp& network() const { return net_; }

  /// Largest |effective log shifted concentration| seen on any forward pass
  /// (beta family; after clipping if enabled).
  double max_abs_log_concentration() const { return max_abs_log_conc_; }

 private:
  struct Elementwise;
  Elementwise compute(const nn::Matrix& raw, dist::NoiseSource& noise, bool with_grad) const;
  void observe_raw(const nn::Matrix& raw) const;

  std::size_t action_width_;
  PolicyConfig config_;
  nn::Mlp net_;
  mutable double max_abs_log_conc_ = 0.0;
};

}  // namespace sacbeta::sac
