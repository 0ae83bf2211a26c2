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

#include <Eigen/Core>

#include "sacbeta/neural/tensor.hpp"

namespace sacbeta::sac {

using Vector = Eigen::VectorXd;

struct Transition {
  Vector state;
  Vector action;  // in [-1, 1]^d
  double reward = 0.0;
  Vector next_state;
  bool terminal = false;
};

struct Batch {
  nn::Matrix states;
  nn::Matrix actions;
  Vector rewards;
  nn::Matrix next_states;
  Vector terminals;  // 1.0 where the episode terminated

  Eigen::Index size() const { return rewards.size(); }
};

/// Fixed-capacity ring of transitions. Once full, each insertion evicts the
/// oldest entry.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t state_width, std::size_t action_width);

  void add(const Transition& t);
  /// Uniform sample with replacement over the stored transitions.
  Batch sample(std::size_t batch_size, std::mt19937_64& rng) const;

  /// i-th oldest stored transition.
  Transition at(std::size_t i) const;

  std::size_t size() const { return count_; }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return count_ == 0; }

 private:
  std::size_t physical(std::size_t logical) const;

  std::size_t capacity_;
  std::size_t state_width_;
  std::size_t action_width_;
  std::size_t cursor_ = 0;
  std::size_t count_ = 0;
  std::vector<double> states_;
  std::vector<double> actions_;
  std::vector<double> rewards_;
  std::vector<double> next_states_;
  std::vector<unsigned char> terminals_;
};

}  // namespace sacbeta::sac
