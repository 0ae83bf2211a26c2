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

// Reference checks for the gradient estimators and samplers. Each check
// compares an estimator against something computed a different way (finite
// differences of an inverse CDF, closed-form moments, an analytic CDF).

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sacbeta/distributions.hpp"

namespace sacbeta::gradcheck {

struct Check {
  std::string name;
  double estimate = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;  // meaning depends on the suite (rtol, SE multiple, alpha)
  bool pass = false;
};

struct Suite {
  std::string name;
  std::vector<Check> checks;
  double seconds = 0.0;
  bool pass() const;
};

/// Shapes and quantile levels of the standard gamma grid (15 points).
const std::vector<double>& gamma_grid_shapes();
const std::vector<double>& gamma_grid_quantiles();

/// Central difference of z(a) = P^{-1}(a, u) at fixed u.
double fd_gamma_shape_grad(double shape, double quantile);

/// ∂z/∂shape from `kind` against fd_gamma_shape_grad over the grid.
Suite gamma_gradient_suite(dist::EstimatorKind kind, double rtol);

/// Beta draw z = z1 / (z1 + z2) with z_i = P^{-1}(shape_i, u_i) at fixed
/// uniforms; the estimator's ∂z/∂α and ∂z/∂β against central differences of
/// the same map. Grid α, β ∈ {1.5, 3, 8} with several uniform pairs.
Suite beta_fixed_uniform_suite(dist::EstimatorKind kind, double rtol);

/// Monte Carlo mean of f'(z)·∂z/∂φ for f(z) = z and z² under Beta(α, β),
/// against the analytic derivative of E[f], within `se_multiple` standard
/// errors.
Suite pathwise_expectation_suite(dist::EstimatorKind kind, std::size_t samples, std::uint64_t seed,
                                 double se_multiple = 3.0);

/// One-sample Kolmogorov–Smirnov statistic against a continuous CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
/// Asymptotic p-value of the KS statistic `d` at sample size n (Marsaglia,
/// Tsang and Wang's series with Stephens' small-sample correction).
double ks_p_value(double d, std::size_t n);

/// KS tests of the gamma and beta samplers against their analytic CDFs at
/// significance `alpha`.
Suite sampler_ks_suite(std::size_t samples, std::uint64_t seed, double alpha = 0.01);

/// Beta CDF I_x(a, b) by adaptive Simpson integration of the density; used as
/// an oracle independent of the sampler.
double beta_cdf(double x, double a, double b);

}  // namespace sacbeta::gradcheck
