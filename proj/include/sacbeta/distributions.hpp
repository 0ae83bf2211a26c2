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

// Policy distribution families and their pathwise gradient estimators.
//
// Every family is factorized over action dimensions. Parameters are held in
// the raw form a policy network emits (mean / log std for the normal
// families, log shifted concentrations for the beta); the accessors apply
// clipping and the concentration map.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string_view>

#include <Eigen/Core>

#include "sacbeta/special_functions.hpp"

namespace sacbeta::dist {

using Rng = std::mt19937_64;
using Vector = Eigen::VectorXd;

enum class Family { Normal, TanhNormal, Beta };
enum class EstimatorKind { Explicit, ImplicitAD, ImplicitOMT };
enum class ConcentrationMap { Exp, Softplus };

std::string_view to_string(Family family);
std::string_view to_string(EstimatorKind kind);

inline constexpr double kRawParamMin = -20.0;
inline constexpr double kRawParamMax = 2.0;
inline constexpr double kBetaSampleEps = 1e-7;
inline constexpr double kTanhLogProbEps = 1e-6;
inline constexpr double kLogTwo = std::numbers::ln2;

class UnsupportedFamilyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Interval clamp on raw network outputs. Its derivative is 1 strictly inside
/// the interval and 0 once clamped.
struct ParamClip {
  bool enabled = true;
  double lo = kRawParamMin;
  double hi = kRawParamMax;

  double apply(double raw) const { return enabled ? std::clamp(raw, lo, hi) : raw; }
  double grad(double raw) const { return (!enabled || (raw > lo && raw < hi)) ? 1.0 : 0.0; }
};

struct NormalParams {
  Vector mean;
  Vector log_std;  // raw; clipped on access
  ParamClip clip;

  std::size_t dim() const { return static_cast<std::size_t>(mean.size()); }
  double effective_log_std(Eigen::Index i) const { return clip.apply(log_std(i)); }
  double stddev(Eigen::Index i) const { return std::exp(effective_log_std(i)); }
};

struct BetaOptions {
  ParamClip clip;
  bool shift = true;  // concentration = 1 + g(raw) keeps the density concave
  ConcentrationMap map = ConcentrationMap::Exp;

  /// Concentration for one raw output and its derivative with respect to it.
  double concentration(double raw) const;
  double dconcentration_draw(double raw) const;
};

struct BetaParams {
  Vector raw_alpha;
  Vector raw_beta;
  BetaOptions options;

  std::size_t dim() const { return static_cast<std::size_t>(raw_alpha.size()); }
  double alpha(Eigen::Index i) const { return options.concentration(raw_alpha(i)); }
  double beta(Eigen::Index i) const { return options.concentration(raw_beta(i)); }
};

/// Shape–rate gamma: density ∝ z^(shape-1) exp(-rate z).
struct GammaParams {
  double shape = 1.0;
  double rate = 1.0;
};

/// A sample together with its pathwise Jacobian. Dimensions are
/// independent, so the Jacobian is stored compactly: entry (p, i) holds
/// ∂value_i / ∂param_{p,i} for parameter kind p (row 0 = mean or raw alpha,
/// row 1 = log std or raw beta); all cross-dimension entries are zero.
struct PathwiseSample {
  Vector value;
  Eigen::MatrixXd dvalue_dparams;
};

/// Source of the parameter-free randomness consumed by the samplers.
class NoiseSource {
 public:
  virtual ~NoiseSource() = default;
  virtual double standard_normal() = 0;
  /// A draw from Gamma(shape, 1).
  virtual double standard_gamma(double shape) = 0;
};

class RngNoise final : public NoiseSource {
 public:
  explicit RngNoise(Rng& rng) : rng_(rng) {}
  double standard_normal() override { return normal_(rng_); }
  double standard_gamma(double shape) override;

 private:
  Rng& rng_;
  std::normal_distribution<double> normal_;
};

// ---------------------------------------------------------------------------
// Implicit reparameterization

/// ∂z/∂φ = -(∂S/∂z)^(-1) ∂S/∂φ for a standardization function S.
inline double implicit_gradient(double dS_dz, double dS_dparam) { return -dS_dparam / dS_dz; }

/// ∂z/∂shape for z ~ Gamma(shape, 1), with the CDF P(shape, z) as the
/// standardization. ImplicitAD differentiates the incomplete gamma routine
/// with dual numbers; ImplicitOMT uses a closed-form approximation.
/// Throws special::NumericalError when the density at z underflows.
double gamma_implicit_grad_shape(double shape, double z, EstimatorKind kind);

/// ∂z/∂rate under the standardization S(z) = rate·z. Exact.
inline double gamma_implicit_grad_rate(double rate, double z) { return -z / rate; }

// ---------------------------------------------------------------------------
// Sampling

double gamma_sample(const GammaParams& params, Rng& rng);

PathwiseSample normal_rsample(const NormalParams& params, const Vector& noise);

struct TanhNormalSample {
  Vector action;            // tanh(u), in (-1, 1)
  double log_prob = 0.0;    // joint density of the action
  PathwiseSample pathwise;  // Jacobian of the action w.r.t. (mean, log std)
};

TanhNormalSample tanh_normal_sample_and_logprob(const NormalParams& params, const Vector& noise);

/// One beta coordinate drawn as z1 / (z1 + z2) from two gamma draws, with
/// gradients with respect to the concentrations. The value is clamped to
/// [kBetaSampleEps, 1 - kBetaSampleEps]; a clamped value has zero gradient.
struct BetaDraw {
  double value = 0.5;
  double dvalue_dalpha = 0.0;
  double dvalue_dbeta = 0.0;
};

BetaDraw beta_from_gammas(double alpha, double beta, double z1, double z2, EstimatorKind kind);

/// The clamped value of z1 / (z1 + z2) alone, without gradients.
double beta_value_from_gammas(double z1, double z2);

/// Beta sample on the unit interval with its Jacobian with respect to the raw
/// (pre-clip, pre-map) network outputs.
PathwiseSample beta_rsample(const BetaParams& params, NoiseSource& noise, EstimatorKind kind);

// ---------------------------------------------------------------------------
// Densities

double normal_log_density(double x, double mean, double log_std);
double beta_log_density_unit(double z, double alpha, double beta);

/// Joint log density of a normal sample.
double log_prob(const NormalParams& params, const Vector& value);
/// Joint log density of a tanh-normal action in (-1, 1)^d.
double tanh_normal_log_prob(const NormalParams& params, const Vector& action);
/// Joint log density of the [-1, 1] action obtained from a unit-interval beta
/// sample; includes the -ln 2 per dimension of the affine action map.
double log_prob(const BetaParams& params, const Vector& unit_value);

/// Per-coordinate log density with its partial derivatives, used to build
/// differentiable losses. Partials with respect to the parameters are taken
/// with respect to the raw network outputs.
struct LogProbPartials {
  double log_prob = 0.0;
  double d_value = 0.0;
  double d_param0 = 0.0;
  double d_param1 = 0.0;
};

LogProbPartials normal_log_prob_partials(double value, double mean, double raw_log_std,
                                         const ParamClip& clip);
/// Density of tanh(u) expressed as a function of the pre-squash value u.
LogProbPartials tanh_normal_log_prob_partials(double u, double mean, double raw_log_std,
                                              const ParamClip& clip);
/// Density of the mapped action 2z - 1, as a function of the unit value z.
LogProbPartials beta_log_prob_partials(double z, double raw_alpha, double raw_beta,
                                       const BetaOptions& options);

// ---------------------------------------------------------------------------
// Action map [0, 1] -> [-1, 1]

inline double action_map(double unit) { return 2.0 * unit - 1.0; }
inline double action_unmap(double action) { return 0.5 * (action + 1.0); }
inline Vector action_map(const Vector& unit) { return (2.0 * unit.array() - 1.0).matrix(); }
inline Vector action_unmap(const Vector& action) { return (0.5 * (action.array() + 1.0)).matrix(); }
inline double action_map_log_jacobian(std::size_t dim) { return -static_cast<double>(dim) * kLogTwo; }

// ---------------------------------------------------------------------------
// Entropy

double entropy(const NormalParams& params);
double beta_entropy_unit(double alpha, double beta);
/// Entropy of the [-1, 1] action distribution (adds ln 2 per dimension).
double entropy(const BetaParams& params);
/// Closed forms exist for Normal and Beta only; TanhNormal throws
/// UnsupportedFamilyError. Use entropy_monte_carlo instead.
double entropy(Family family, const NormalParams& params);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

MonteCarloEstimate entropy_monte_carlo(const NormalParams& params, Family family,
                                       NoiseSource& noise, std::size_t samples);
MonteCarloEstimate entropy_monte_carlo(const BetaParams& params, NoiseSource& noise,
                                       std::size_t samples);

}  // namespace sacbeta::dist
