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
#include <sstream>

#include "sacbeta/distributions.hpp"

namespace sacbeta::dist {
namespace {

using special::DomainError;
using special::NumericalError;

// Uniform on the open interval (0, 1).
double open_uniform(Rng& rng) {
  for (;;) {
    const double u = std::generate_canonical<double, 53>(rng);
    if (u > 0.0) return u;
  }
}

// Marsaglia & Tsang (2000) squeeze sampler for Gamma(shape, 1), with the
// u^(1/shape) boost for shape < 1.
template <typename Normal, typename Uniform>
double marsaglia_tsang(double shape, Normal&& normal, Uniform&& uniform) {
  double boost = 1.0;
  if (shape < 1.0) {
    boost = std::exp(std::log(uniform()) / shape);
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 ||
        std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      // Tiny shapes can underflow the boost; keep the draw in the support.
      return std::max(d * v * boost, DBL_MIN);
    }
  }
}

void check_shape_args(double shape, double z) {
  if (!std::isfinite(shape) || shape <= 0.0 || !std::isfinite(z) || z <= 0.0) {
    std::ostringstream os;
    os << "gamma_implicit_grad_shape(" << shape << ", " << z << "): requires shape > 0, z > 0";
    throw DomainError(os.str());
  }
}

double ad_shape_grad(double shape, double z) {
  const double dcdf_dshape = special::reg_inc_gamma_p_dual({shape, 1.0}, z).deriv;
  const double density = std::exp(special::gamma_log_density(shape, z));
  if (!(density > 0.0) || !std::isfinite(density)) {
    std::ostringstream os;
    os << "gamma density underflow at shape=" << shape << ", z=" << z;
    throw NumericalError(os.str());
  }
  return implicit_gradient(density, dcdf_dshape);
}

// Closed-form approximation of -(∂P/∂shape) / density from the optimal mass
// transport line of work: a truncated Taylor series of the CDF for small z, a
// Rice saddle-point expansion for large shape, and a bivariate rational
// minimax fit in (log(z/shape), log shape) elsewhere.
double omt_shape_grad(double shape, double z) {
  if (z < 0.8) {
    double numer = 1.0;
    double denom = shape;
    double series1 = numer / denom;
    double series2 = numer / (denom * denom);
    for (int i = 1; i <= 5; ++i) {
      numer *= -z / i;
      denom += 1.0;
      series1 += numer / denom;
      series2 += numer / (denom * denom);
    }
    const double pow_z_shape = std::pow(z, shape);
    const double density = std::pow(z, shape - 1.0) * std::exp(-z);
    const double cdf = pow_z_shape * series1;
    const double dcdf_dshape = (std::log(z) - special::digamma(shape)) * cdf - pow_z_shape * series2;
    const double result = -dcdf_dshape / density;
    return std::isnan(result) ? 0.0 : result;
  }

  if (shape > 8.0) {
    if (0.9 * shape <= z && z <= 1.1 * shape) {
      const double numer_1 = 1.0 + 24.0 * shape * (1.0 + 12.0 * shape);
      const double numer_2 = 1440.0 * (shape * shape) + 6.0 * z * (53.0 - 120.0 * z) -
                             65.0 * z * z / shape + shape * (107.0 + 3600.0 * z);
      const double denom = 1244160.0 * (shape * shape) * (shape * shape);
      return numer_1 * numer_2 / denom;
    }
    const double denom = std::sqrt(8.0 * shape);
    const double term2 = denom / (shape - z);
    const double term3 = std::pow(z - shape - shape * std::log(z / shape), -1.5);
    const double term23 = (z < shape) ? term2 - term3 : term2 + term3;
    const double term1 = std::log(z / shape) * term23 -
                         std::sqrt(2.0 / shape) * (shape + z) / ((shape - z) * (shape - z));
    const double stirling = 1.0 + 1.0 / (12.0 * shape) * (1.0 + 1.0 / (24.0 * shape));
    return -stirling * z * term1 / denom;
  }

  static constexpr double kCoef[3][8] = {
      {0.16009398, -0.094634809, 0.025146376, -0.0030648343, 1.0, 0.32668115, 0.10406089,
       0.0014179084},
      {0.53487893, 0.1298071, 0.065735949, -0.0015649758, 0.16639465, 0.020070113,
       -0.0035938915, -0.00058392623},
      {0.040121004, -0.0065914022, -0.0026286047, -0.0013441777, 0.017050642, -0.0021309326,
       0.00085092367, -1.5247877e-07},
  };
  const double u = std::log(z / shape);
  const double v = std::log(shape);
  double c[8];
  for (int i = 0; i < 8; ++i) c[i] = kCoef[0][i] + u * (kCoef[1][i] + u * kCoef[2][i]);
  const double p = c[0] + v * (c[1] + v * (c[2] + v * c[3]));
  const double q = c[4] + v * (c[5] + v * (c[6] + v * c[7]));
  return std::exp(p / q);
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Normal: return "normal";
    case Family::TanhNormal: return "tanh-normal";
    case Family::Beta: return "beta";
  }
  return "?";
}

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Explicit: return "explicit";
    case EstimatorKind::ImplicitAD: return "implicit-ad";
    case EstimatorKind::ImplicitOMT: return "implicit-omt";
  }
  return "?";
}

double RngNoise::standard_gamma(double shape) {
  return marsaglia_tsang(
      shape, [this] { return normal_(rng_); }, [this] { return open_uniform(rng_); });
}

double gamma_sample(const GammaParams& params, Rng& rng) {
  if (!(params.shape > 0.0) || !(params.rate > 0.0) || !std::isfinite(params.shape) ||
      !std::isfinite(params.rate)) {
    throw DomainError("gamma_sample: shape and rate must be finite and positive");
  }
  std::normal_distribution<double> normal;
  const double z = marsaglia_tsang(
      params.shape, [&] { return normal(rng); }, [&] { return open_uniform(rng); });
  return std::max(z / params.rate, DBL_MIN);
}

double gamma_implicit_grad_shape(double shape, double z, EstimatorKind kind) {
  check_shape_args(shape, z);
  switch (kind) {
    case EstimatorKind::ImplicitAD: return ad_shape_grad(shape, z);
    case EstimatorKind::ImplicitOMT: return omt_shape_grad(shape, z);
    case EstimatorKind::Explicit: break;
  }
  throw std::invalid_argument("gamma_implicit_grad_shape: the gamma family needs an implicit estimator");
}

}  // namespace sacbeta::dist
