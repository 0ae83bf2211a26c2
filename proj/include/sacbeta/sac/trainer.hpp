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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sacbeta/environments.hpp"
#include "sacbeta/sac/agent.hpp"

namespace sacbeta::sac {

struct EvalResult {
  double mean_return = 0.0;
  double std_return = 0.0;  // sample (n - 1) standard deviation; 0 for one episode
  std::vector<double> returns;
};

using ActionFn = std::function<Vector(const Vector& observation)>;

/// Runs `episodes` full episodes and sums undiscounted rewards. If `seed` is
/// given the first reset uses it; later resets continue the env's stream.
EvalResult evaluate(const ActionFn& policy, env::Environment& env, std::size_t episodes,
                    std::optional<std::uint64_t> seed = std::nullopt);
/// Evaluates the agent's distribution mean.
EvalResult evaluate(const SacAgent& agent, env::Environment& env, std::size_t episodes,
                    std::optional<std::uint64_t> seed = std::nullopt);

struct TrainConfig {
  std::size_t total_steps = 50000;  // environment steps, warmup included
  std::size_t warmup_steps = 1000;
  std::size_t test_every = 1000;    // counted in post-warmup steps
  std::size_t test_episodes = 10;
  std::size_t buffer_capacity = 1000000;
  std::size_t updates_per_step = 1;
  std::size_t target_update_every = 1;  // in gradient updates
  std::uint64_t seed = 1;
  SacOptions sac;
  bool record_wall_clock = false;
  /// Log-concentration magnitude reported as an event when first exceeded.
  double concentration_alarm = 20.0;
};

struct MetricsRecord {
  std::size_t step = 0;  // absolute environment steps, warmup included
  double mean_return = 0.0;
  double std_return = 0.0;
  double critic_loss = 0.0;  // mean over updates since the previous record
  double actor_loss = 0.0;
  std::optional<double> wall_clock_s;
};

struct TrainResult {
  std::vector<MetricsRecord> records;
  std::size_t steps_done = 0;
  std::size_t updates = 0;
  bool aborted = false;
  std::string abort_reason;
  std::size_t abort_step = 0;
  double max_abs_log_concentration = 0.0;
  std::optional<std::size_t> concentration_alarm_step;
  std::size_t buffer_size = 0;
};

struct TrainHooks {
  std::function<void(const MetricsRecord&)> on_record;
  std::function<void(const std::string&)> on_event;
  /// Called with the agent after construction; tests use it to inspect state.
  std::function<void(SacAgent&)> on_agent;
  /// Called with the agent once the loop ends (also after an abort).
  std::function<void(SacAgent&)> on_finish;
};

/// Warmup with uniform random actions, then one act / store / update cycle
/// per step (critic, actor, target). Evaluates every `test_every` post-warmup
/// steps and once more at the end if the last step was not evaluated. Aborts (and
/// reports) on a non-finite loss or parameter or an estimator numerical
/// failure.
TrainResult train(const TrainConfig& config, env::Environment& env, const TrainHooks& hooks = {});

}  // namespace sacbeta::sac
