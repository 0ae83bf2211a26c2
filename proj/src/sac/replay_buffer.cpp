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

#include "sacbeta/sac/replay_buffer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sacbeta::sac {

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t state_width, std::size_t action_width)
    : capacity_(capacity), state_width_(state_width), action_width_(action_width) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
}

std::size_t ReplayBuffer::physical(std::size_t logical) const {
  // Before the ring wraps, storage order is insertion order.
  return count_ < capacity_ ? logical : (cursor_ + logical) % capacity_;
}

void ReplayBuffer::add(const Transition& t) {
  if (static_cast<std::size_t>(t.state.size()) != state_width_ ||
      static_cast<std::size_t>(t.next_state.size()) != state_width_ ||
      static_cast<std::size_t>(t.action.size()) != action_width_) {
    throw std::invalid_argument("ReplayBuffer::add: transition width mismatch");
  }
  if (!std::isfinite(t.reward)) throw std::invalid_argument("ReplayBuffer::add: non-finite reward");

  if (count_ < capacity_) {
    states_.insert(states_.end(), t.state.data(), t.state.data() + state_width_);
    actions_.insert(actions_.end(), t.action.data(), t.action.data() + action_width_);
    next_states_.insert(next_states_.end(), t.next_state.data(), t.next_state.data() + state_width_);
    rewards_.push_back(t.reward);
    terminals_.push_back(t.terminal ? 1 : 0);
    ++count_;
    cursor_ = count_ % capacity_;
    return;
  }
  const std::size_t i = cursor_;
  std::copy_n(t.state.data(), state_width_, states_.begin() + static_cast<std::ptrdiff_t>(i * state_width_));
  std::copy_n(t.action.data(), action_width_, actions_.begin() + static_cast<std::ptrdiff_t>(i * action_width_));
  std::copy_n(t.next_state.data(), state_width_,
              next_states_.begin() + static_cast<std::ptrdiff_t>(i * state_width_));
  rewards_[i] = t.reward;
  terminals_[i] = t.terminal ? 1 : 0;
  cursor_ = (cursor_ + 1) % capacity_;
}

Transition ReplayBuffer::at(std::size_t i) const {
  if (i >= count_) throw std::out_of_range("ReplayBuffer::at");
  const std::size_t p = physical(i);
  Transition t;
  t.state = Eigen::Map<const Vector>(states_.data() + p * state_width_, static_cast<Eigen::Index>(state_width_));
  t.action = Eigen::Map<const Vector>(actions_.data() + p * action_width_, static_cast<Eigen::Index>(action_width_));
  t.next_state =
      Eigen::Map<const Vector>(next_states_.data() + p * state_width_, static_cast<Eigen::Index>(state_width_));
  t.reward = rewards_[p];
  t.terminal = terminals_[p] != 0;
  return t;
}

Batch ReplayBuffer::sample(std::size_t batch_size, std::mt19937_64& rng) const {
  if (count_ == 0) throw std::logic_error("ReplayBuffer::sample: buffer is empty");
  const auto n = static_cast<Eigen::Index>(batch_size);
  const auto sw = static_cast<Eigen::Index>(state_width_);
  const auto aw = static_cast<Eigen::Index>(action_width_);
  Batch b{nn::Matrix(n, sw), nn::Matrix(n, aw), Vector(n), nn::Matrix(n, sw), Vector(n)};
  std::uniform_int_distribution<std::size_t> pick(0, count_ - 1);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::size_t i = pick(rng);
    b.states.row(r) = Eigen::Map<const Eigen::RowVectorXd>(states_.data() + i * state_width_, sw);
    b.actions.row(r) = Eigen::Map<const Eigen::RowVectorXd>(actions_.data() + i * action_width_, aw);
    b.next_states.row(r) = Eigen::Map<const Eigen::RowVectorXd>(next_states_.data() + i * state_width_, sw);
    b.rewards(r) = rewards_[i];
    b.terminals(r) = terminals_[i] != 0 ? 1.0 : 0.0;
  }
  return b;
}

}  // namespace sacbeta::sac
