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

#include "sacbeta/sac/policy.hpp"

#include <algorithm>
#include <cmath>

namespace sacbeta::sac {

using dist::Family;
using nn::Matrix;
using nn::Tensor;

// Per-coordinate quantities for a batch of draws. `value` is the pre-action
// sample (unit beta value, or the normal u); the j*/d* members are its
// Jacobian and the log-prob partials, filled only when gradients are needed.
struct Policy::Elementwise {
  Matrix value, j0, j1;
  Matrix lp, d_value, d_p0, d_p1;
};

Policy::Policy(std::size_t state_width, std::size_t action_width, std::vector<std::size_t> hidden,
               PolicyConfig config, std::mt19937_64& rng)
    : action_width_(action_width),
      config_(config),
      net_("policy", state_width, std::move(hidden), 2 * action_width, rng) {
  if (action_width == 0) throw std::invalid_argument("Policy: action width must be positive");
}

void Policy::observe_raw(const Matrix& raw) const {
  if (config_.family != Family::Beta) return;
  const auto& clip = config_.beta.clip;
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const double r = std::abs(clip.apply(raw.data()[i]));
    // NaN compares false; treat it as unbounded.
    if (!(r <= max_abs_log_conc_)) max_abs_log_conc_ = std::isnan(r) ? INFINITY : r;
  }
}

Policy::Elementwise Policy::compute(const Matrix& raw, dist::NoiseSource& noise, bool with_grad) const {
  const Eigen::Index n = raw.rows();
  const auto d = static_cast<Eigen::Index>(action_width_);
  if (raw.cols() != 2 * d) throw nn::ShapeError("Policy: network output width mismatch");
  observe_raw(raw);

  Elementwise e;
  e.value.resize(n, d);
  e.lp.resize(n, d);
  if (with_grad) {
    for (Matrix* m : {&e.j0, &e.j1, &e.d_value, &e.d_p0, &e.d_p1}) m->resize(n, d);
  }

  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double p0 = raw(r, i);
      const double p1 = raw(r, d + i);
      dist::LogProbPartials lp;
      if (config_.family == Family::Beta) {
        const auto& opt = config_.beta;
        const double a = opt.concentration(p0);
        const double b = opt.concentration(p1);
        const double z1 = noise.standard_gamma(a);
        const double z2 = noise.standard_gamma(b);
        double z;
        if (with_grad) {
          const dist::BetaDraw draw = dist::beta_from_gammas(a, b, z1, z2, config_.estimator);
          z = draw.value;
          e.j0(r, i) = draw.dvalue_dalpha * opt.dconcentration_draw(p0);
          e.j1(r, i) = draw.dvalue_dbeta * opt.dconcentration_draw(p1);
          lp = dist::beta_log_prob_partials(z, p0, p1, opt);
        } else {
          z = dist::beta_value_from_gammas(z1, z2);
          lp.log_prob = dist::beta_log_density_unit(z, a, b) - dist::kLogTwo;
        }
        e.value(r, i) = z;
      } else {
        const auto& clip = config_.log_std_clip;
        const double sd = std::exp(clip.apply(p1));
        const double eps = noise.standard_normal();
        const double u = p0 + sd * eps;
        e.value(r, i) = u;
        if (with_grad) {
          e.j0(r, i) = 1.0;
          e.j1(r, i) = sd * eps * clip.grad(p1);
        }
        lp = config_.family == Family::TanhNormal ? dist::tanh_normal_log_prob_partials(u, p0, p1, clip)
                                                  : dist::normal_log_prob_partials(u, p0, p1, clip);
      }
      e.lp(r, i) = lp.log_prob;
      if (with_grad) {
        e.d_value(r, i) = lp.d_value;
        e.d_p0(r, i) = lp.d_param0;
        e.d_p1(r, i) = lp.d_param1;
      }
    }
  }
  return e;
}

Policy::Sample Policy::rsample(nn::Tape& tape, const Matrix& states, dist::NoiseSource& noise) {
  const auto d = static_cast<Eigen::Index>(action_width_);
  Sample s;
  s.raw = net_.forward(tape, tape.constant(states));
  Elementwise e = compute(s.raw.value(), noise, true);

  const Tensor p0 = nn::slice_cols(s.raw, 0, d);
  const Tensor p1 = nn::slice_cols(s.raw, d, d);
  const Tensor value = nn::elementwise({p0, p1}, std::move(e.value), {std::move(e.j0), std::move(e.j1)});
  const Tensor lp = nn::elementwise({value, p0, p1}, std::move(e.lp),
                                    {std::move(e.d_value), std::move(e.d_p0), std::move(e.d_p1)});
  s.log_prob = nn::row_sum(lp);
  switch (config_.family) {
    case Family::Beta: s.action = nn::affine(value, 2.0, -1.0); break;
    case Family::TanhNormal: s.action = nn::tanh(value); break;
    case Family::Normal: s.action = value; break;
  }
  return s;
}

Policy::Draw Policy::sample(const Matrix& states, dist::NoiseSource& noise) const {
  Draw out;
  out.raw = net_.infer(states);
  Elementwise e = compute(out.raw, noise, false);
  out.log_prob = e.lp.rowwise().sum();
  switch (config_.family) {
    case Family::Beta: out.action = (2.0 * e.value.array() - 1.0).matrix(); break;
    case Family::TanhNormal: out.action = e.value.array().tanh().matrix(); break;
    case Family::Normal: out.action = std::move(e.value); break;
  }
  return out;
}

Matrix Policy::mean_action(const Matrix& states) const {
  const Matrix raw = net_.infer(states);
  const auto d = static_cast<Eigen::Index>(action_width_);
  observe_raw(raw);
  Matrix out(raw.rows(), d);
  for (Eigen::Index r = 0; r < raw.rows(); ++r) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double p0 = raw(r, i);
      switch (config_.family) {
        case Family::Beta: {
          const double a = config_.beta.concentration(p0);
          const double b = config_.beta.concentration(raw(r, d + i));
          out(r, i) = dist::action_map(a / (a + b));
          break;
        }
        case Family::TanhNormal: out(r, i) = std::tanh(p0); break;
        case Family::Normal: out(r, i) = std::clamp(p0, -1.0, 1.0); break;
      }
    }
  }
  return out;
}

Matrix Policy::to_env_action(const Matrix& critic_action) {
  return critic_action.cwiseMax(-1.0).cwiseMin(1.0);
}

}  // namespace sacbeta::sac
