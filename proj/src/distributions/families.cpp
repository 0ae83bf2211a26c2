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

#include <cfloat>
#include <cmath>
#include <numbers>

#include "sacbeta/distributions.hpp"

namespace sacbeta::dist {
namespace {

using special::digamma;
using special::DomainError;
using special::log_gamma;

constexpr double kHalfLogTwoPi = 0.91893853320467274178;

double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double log_beta_fn(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

void check_noise(const NormalParams& params, const Vector& noise) {
  if (params.log_std.size() != params.mean.size() || noise.size() != params.mean.size()) {
    throw std::invalid_argument("normal sample: parameter and noise widths differ");
  }
}

}  // namespace

double BetaOptions::concentration(double raw) const {
  const double r = clip.apply(raw);
  const double g = (map == ConcentrationMap::Exp) ? std::exp(r) : softplus(r);
  return shift ? 1.0 + g : g;
}

double BetaOptions::dconcentration_draw(double raw) const {
  const double r = clip.apply(raw);
  const double dg = (map == ConcentrationMap::Exp) ? std::exp(r) : sigmoid(r);
  return dg * clip.grad(raw);
}

// ---------------------------------------------------------------------------
// Normal and tanh-normal

PathwiseSample normal_rsample(const NormalParams& params, const Vector& noise) {
  check_noise(params, noise);
  const auto d = params.mean.size();
  PathwiseSample out{Vector(d), Eigen::MatrixXd(2, d)};
  for (Eigen::Index i = 0; i < d; ++i) {
    const double sd = params.stddev(i);
    out.value(i) = params.mean(i) + sd * noise(i);
    out.dvalue_dparams(0, i) = 1.0;
    out.dvalue_dparams(1, i) = sd * noise(i) * params.clip.grad(params.log_std(i));
  }
  return out;
}

TanhNormalSample tanh_normal_sample_and_logprob(const NormalParams& params, const Vector& noise) {
  TanhNormalSample out;
  out.pathwise = normal_rsample(params, noise);
  const auto d = params.mean.size();
  out.action.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double u = out.pathwise.value(i);
    const double t = std::tanh(u);
    const double dtanh = 1.0 - t * t;
    out.action(i) = t;
    out.log_prob += normal_log_density(u, params.mean(i), params.effective_log_std(i)) -
                    std::log(dtanh + kTanhLogProbEps);
    out.pathwise.dvalue_dparams.col(i) *= dtanh;
  }
  out.pathwise.value = out.action;
  return out;
}

double normal_log_density(double x, double mean, double log_std) {
  const double s = (x - mean) * std::exp(-log_std);
  return -0.5 * s * s - log_std - kHalfLogTwoPi;
}

double log_prob(const NormalParams& params, const Vector& value) {
  if (value.size() != params.mean.size()) throw std::invalid_argument("log_prob: width mismatch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < value.size(); ++i) {
    total += normal_log_density(value(i), params.mean(i), params.effective_log_std(i));
  }
  return total;
}

double tanh_normal_log_prob(const NormalParams& params, const Vector& action) {
  if (action.size() != params.mean.size()) throw std::invalid_argument("log_prob: width mismatch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < action.size(); ++i) {
    const double a = action(i);
    if (!(a > -1.0 && a < 1.0)) throw DomainError("tanh_normal_log_prob: action outside (-1, 1)");
    const double u = std::atanh(a);
    total += normal_log_density(u, params.mean(i), params.effective_log_std(i)) -
             std::log(1.0 - a * a + kTanhLogProbEps);
  }
  return total;
}

LogProbPartials normal_log_prob_partials(double value, double mean, double raw_log_std,
                                         const ParamClip& clip) {
  const double log_std = clip.apply(raw_log_std);
  const double inv_var = std::exp(-2.0 * log_std);
  const double diff = value - mean;
  LogProbPartials p;
  p.log_prob = normal_log_density(value, mean, log_std);
  p.d_value = -diff * inv_var;
  p.d_param0 = diff * inv_var;
  p.d_param1 = (diff * diff * inv_var - 1.0) * clip.grad(raw_log_std);
  return p;
}

LogProbPartials tanh_normal_log_prob_partials(double u, double mean, double raw_log_std,
                                              const ParamClip& clip) {
  LogProbPartials p = normal_log_prob_partials(u, mean, raw_log_std, clip);
  const double t = std::tanh(u);
  const double dtanh = 1.0 - t * t;
  p.log_prob -= std::log(dtanh + kTanhLogProbEps);
  p.d_value += 2.0 * t * dtanh / (dtanh + kTanhLogProbEps);
  return p;
}

// ---------------------------------------------------------------------------
// Beta

double beta_value_from_gammas(double z1, double z2) {
  z1 = std::max(z1, DBL_MIN);
  z2 = std::max(z2, DBL_MIN);
  return std::clamp(z1 / (z1 + z2), kBetaSampleEps, 1.0 - kBetaSampleEps);
}

BetaDraw beta_from_gammas(double alpha, double beta, double z1, double z2, EstimatorKind kind) {
  BetaDraw out;
  out.value = beta_value_from_gammas(z1, z2);
  // A gamma draw that underflowed carries no usable path information; treat
  // it like the clamp and pass no gradient.
  if (out.value <= kBetaSampleEps || out.value >= 1.0 - kBetaSampleEps || !(z1 > DBL_MIN) || !(z2 > DBL_MIN)) {
    return out;
  }
  // Quotient rule written as (1 - v)/sum and v/sum so nothing is squared.
  const double sum = z1 + z2;
  out.dvalue_dalpha = (z2 / sum) / sum * gamma_implicit_grad_shape(alpha, z1, kind);
  out.dvalue_dbeta = -(z1 / sum) / sum * gamma_implicit_grad_shape(beta, z2, kind);
  return out;
}

PathwiseSample beta_rsample(const BetaParams& params, NoiseSource& noise, EstimatorKind kind) {
  if (params.raw_beta.size() != params.raw_alpha.size()) {
    throw std::invalid_argument("beta_rsample: parameter widths differ");
  }
  const auto d = params.raw_alpha.size();
  PathwiseSample out{Vector(d), Eigen::MatrixXd(2, d)};
  for (Eigen::Index i = 0; i < d; ++i) {
    const double a = params.alpha(i);
    const double b = params.beta(i);
    const double z1 = noise.standard_gamma(a);
    const double z2 = noise.standard_gamma(b);
    const BetaDraw draw = beta_from_gammas(a, b, z1, z2, kind);
    out.value(i) = draw.value;
    out.dvalue_dparams(0, i) = draw.dvalue_dalpha * params.options.dconcentration_draw(params.raw_alpha(i));
    out.dvalue_dparams(1, i) = draw.dvalue_dbeta * params.options.dconcentration_draw(params.raw_beta(i));
  }
  return out;
}

double beta_log_density_unit(double z, double alpha, double beta) {
  if (!(z > 0.0 && z < 1.0)) throw DomainError("beta_log_density_unit: z outside (0, 1)");
  if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("beta_log_density_unit: bad concentration");
  return (alpha - 1.0) * std::log(z) + (beta - 1.0) * std::log1p(-z) - log_beta_fn(alpha, beta);
}

double log_prob(const BetaParams& params, const Vector& unit_value) {
  if (unit_value.size() != params.raw_alpha.size()) throw std::invalid_argument("log_prob: width mismatch");
  double total = action_map_log_jacobian(params.dim());
  for (Eigen::Index i = 0; i < unit_value.size(); ++i) {
    total += beta_log_density_unit(unit_value(i), params.alpha(i), params.beta(i));
  }
  return total;
}

LogProbPartials beta_log_prob_partials(double z, double raw_alpha, double raw_beta,
                                       const BetaOptions& options) {
  const double a = options.concentration(raw_alpha);
  const double b = options.concentration(raw_beta);
  const double psi_ab = digamma(a + b);
  LogProbPartials p;
  p.log_prob = beta_log_density_unit(z, a, b) - kLogTwo;
  p.d_value = (a - 1.0) / z - (b - 1.0) / (1.0 - z);
  p.d_param0 = (std::log(z) - digamma(a) + psi_ab) * options.dconcentration_draw(raw_alpha);
  p.d_param1 = (std::log1p(-z) - digamma(b) + psi_ab) * options.dconcentration_draw(raw_beta);
  return p;
}

// ---------------------------------------------------------------------------
// Entropy

double entropy(const NormalParams& params) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < params.mean.size(); ++i) {
    total += 0.5 + kHalfLogTwoPi + params.effective_log_std(i);
  }
  return total;
}

double beta_entropy_unit(double alpha, double beta) {
  return log_beta_fn(alpha, beta) - (alpha - 1.0) * digamma(alpha) - (beta - 1.0) * digamma(beta) +
         (alpha + beta - 2.0) * digamma(alpha + beta);
}

double entropy(const BetaParams& params) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < params.raw_alpha.size(); ++i) {
    total += beta_entropy_unit(params.alpha(i), params.beta(i)) + kLogTwo;
  }
  return total;
}

double entropy(Family family, const NormalParams& params) {
  switch (family) {
    case Family::Normal: return entropy(params);
    case Family::TanhNormal:
      throw UnsupportedFamilyError("tanh-normal entropy has no closed form; use entropy_monte_carlo");
    case Family::Beta: break;
  }
  throw UnsupportedFamilyError("entropy: beta requires BetaParams");
}

namespace {

MonteCarloEstimate summarize(double sum, double sum_sq, std::size_t n) {
  const double mean = sum / static_cast<double>(n);
  const double var = (sum_sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
  return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(n))};
}

}  // namespace

MonteCarloEstimate entropy_monte_carlo(const NormalParams& params, Family family,
                                       NoiseSource& noise, std::size_t samples) {
  if (samples < 2) throw std::invalid_argument("entropy_monte_carlo: need at least 2 samples");
  if (family == Family::Beta) throw UnsupportedFamilyError("entropy_monte_carlo: beta requires BetaParams");
  const auto d = params.mean.size();
  Vector eps(d);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    for (Eigen::Index i = 0; i < d; ++i) eps(i) = noise.standard_normal();
    double lp;
    if (family == Family::TanhNormal) {
      lp = tanh_normal_sample_and_logprob(params, eps).log_prob;
    } else {
      lp = log_prob(params, normal_rsample(params, eps).value);
    }
    sum -= lp;
    sum_sq += lp * lp;
  }
  return summarize(sum, sum_sq, samples);
}

MonteCarloEstimate entropy_monte_carlo(const BetaParams& params, NoiseSource& noise,
                                       std::size_t samples) {
  if (samples < 2) throw std::invalid_argument("entropy_monte_carlo: need at least 2 samples");
  const auto d = params.raw_alpha.size();
  Vector z(d);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double z1 = noise.standard_gamma(params.alpha(i));
      z(i) = beta_value_from_gammas(z1, noise.standard_gamma(params.beta(i)));
    }
    const double lp = log_prob(params, z);
    sum -= lp;
    sum_sq += lp * lp;
  }
  return summarize(sum, sum_sq, samples);
}

}  // namespace sacbeta::dist
