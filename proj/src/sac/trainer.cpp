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

#include "sacbeta/sac/trainer.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "sacbeta/special_functions.hpp"

namespace sacbeta::sac {

EvalResult evaluate(const ActionFn& policy, env::Environment& env, std::size_t episodes,
                    std::optional<std::uint64_t> seed) {
  EvalResult out;
  for (std::size_t ep = 0; ep < episodes; ++ep) {
    Vector obs = env.reset(ep == 0 ? seed : std::nullopt);
    double total = 0.0;
    for (;;) {
      const env::StepResult r = env.step(policy(obs));
      total += r.reward;
      obs = r.observation;
      if (r.terminal || r.truncated) break;
    }
    out.returns.push_back(total);
  }
  if (episodes == 0) return out;
  double sum = 0.0;
  for (double r : out.returns) sum += r;
  out.mean_return = sum / static_cast<double>(episodes);
  if (episodes > 1) {
    double ss = 0.0;
    for (double r : out.returns) ss += (r - out.mean_return) * (r - out.mean_return);
    out.std_return = std::sqrt(ss / static_cast<double>(episodes - 1));
  }
  return out;
}

EvalResult evaluate(const SacAgent& agent, env::Environment& env, std::size_t episodes,
                    std::optional<std::uint64_t> seed) {
  return evaluate([&agent](const Vector& s) { return agent.act_deterministic(s); }, env, episodes, seed);
}

namespace {

// Seed streams; 0 and 1 are taken by the agent.
constexpr std::uint64_t kEnvStream = 2;
constexpr std::uint64_t kEvalStream = 3;
constexpr std::uint64_t kLoopStream = 4;

}  // namespace

TrainResult train(const TrainConfig& config, env::Environment& env, const TrainHooks& hooks) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const env::EnvSpec spec = env.spec();
  if (config.test_every == 0 || config.updates_per_step == 0 || config.target_update_every == 0) {
    throw std::invalid_argument("train: test_every, updates_per_step and target_update_every must be positive");
  }

  SacAgent agent(spec.observation_width, spec.action_width, config.sac, config.seed);
  if (hooks.on_agent) hooks.on_agent(agent);
  ReplayBuffer buffer(config.buffer_capacity, spec.observation_width, spec.action_width);
  auto eval_env = env::make_environment(spec.name);
  std::mt19937_64 loop_rng(derive_seed(config.seed, kLoopStream));
  std::uniform_real_distribution<double> uniform_action(-1.0, 1.0);
  const std::uint64_t eval_seed = derive_seed(config.seed, kEvalStream);

  TrainResult result;
  auto event = [&](const std::string& msg) {
    if (hooks.on_event) hooks.on_event(msg);
  };
  auto abort_run = [&](std::size_t step, const std::string& why) {
    result.aborted = true;
    result.abort_step = step;
    result.abort_reason = why;
    event("abort at step " + std::to_string(step) + ": " + why);
  };

  double critic_acc = 0.0, actor_acc = 0.0;
  std::size_t acc_n = 0;
  auto record = [&](std::size_t step) {
    const EvalResult ev = evaluate(agent, *eval_env, config.test_episodes, eval_seed);
    MetricsRecord m;
    m.step = step;
    m.mean_return = ev.mean_return;
    m.std_return = ev.std_return;
    m.critic_loss = acc_n ? critic_acc / static_cast<double>(acc_n) : 0.0;
    m.actor_loss = acc_n ? actor_acc / static_cast<double>(acc_n) : 0.0;
    if (config.record_wall_clock) m.wall_clock_s = std::chrono::duration<double>(Clock::now() - t0).count();
    critic_acc = actor_acc = 0.0;
    acc_n = 0;
    result.records.push_back(m);
    if (hooks.on_record) hooks.on_record(m);
  };

  Vector obs = env.reset(derive_seed(config.seed, kEnvStream));
  bool evaluated_last = true;
  for (std::size_t step = 1; step <= config.total_steps; ++step) {
    const bool warm = step <= config.warmup_steps;
    Vector action(spec.action_width);
    if (warm) {
      for (Eigen::Index i = 0; i < action.size(); ++i) action(i) = uniform_action(loop_rng);
    } else {
      try {
        action = agent.act(obs);
      } catch (const std::domain_error& e) {
        abort_run(step, std::string("acting failed: ") + e.what());
        break;
      } catch (const special::NumericalError& e) {
        abort_run(step, std::string("acting failed: ") + e.what());
        break;
      }
      if (!action.allFinite()) {
        abort_run(step, "non-finite action");
        break;
      }
    }
    const env::StepResult r = env.step(action);
    buffer.add({obs, action, r.reward, r.observation, r.terminal});
    obs = (r.terminal || r.truncated) ? env.reset() : r.observation;
    result.steps_done = step;
    if (warm) continue;

    bool failed = false;
    for (std::size_t u = 0; u < config.updates_per_step && !failed; ++u) {
      const Batch batch = buffer.sample(config.sac.batch_size, loop_rng);
      try {
        const auto [l1, l2] = agent.critic_update(batch);
        const double la = agent.actor_update(batch);
        ++result.updates;
        if (result.updates % config.target_update_every == 0) agent.target_update();
        if (!std::isfinite(l1) || !std::isfinite(l2) || !std::isfinite(la)) {
          std::ostringstream os;
          os << "non-finite loss (critic " << l1 << ", " << l2 << "; actor " << la << ")";
          abort_run(step, os.str());
          failed = true;
        }
        critic_acc += 0.5 * (l1 + l2);
        actor_acc += la;
        ++acc_n;
      } catch (const std::domain_error& e) {
        abort_run(step, std::string("estimator failure: ") + e.what());
        failed = true;
      } catch (const special::NumericalError& e) {
        abort_run(step, std::string("estimator failure: ") + e.what());
        failed = true;
      }
    }
    if (failed) break;
    if (!agent.all_finite()) {
      abort_run(step, "non-finite network parameter");
      break;
    }
    result.max_abs_log_concentration = agent.policy().max_abs_log_concentration();
    if (!result.concentration_alarm_step && result.max_abs_log_concentration > config.concentration_alarm) {
      result.concentration_alarm_step = step;
      std::ostringstream os;
      os << "|log shifted concentration| reached " << result.max_abs_log_concentration << " at step " << step;
      event(os.str());
    }

    evaluated_last = false;
    if ((step - config.warmup_steps) % config.test_every == 0) {
      record(step);
      evaluated_last = true;
    }
  }
  result.max_abs_log_concentration = agent.policy().max_abs_log_concentration();
  if (!result.aborted && !evaluated_last) record(result.steps_done);
  result.buffer_size = buffer.size();
  if (hooks.on_finish) hooks.on_finish(agent);
  return result;
}

}  // namespace sacbeta::sac
