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

// Shared helpers for the unit tests.

#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "sacbeta/distributions.hpp"

namespace sacbeta::tsupport {

/// Noise defined by a fixed list of uniforms: gamma draws are exact
/// quantiles P^{-1}(shape, u), normal draws are Φ^{-1}(u). Replaying the same
/// uniforms under perturbed parameters gives the inverse-CDF sample path, so
/// finite differences of anything built on it see fixed underlying noise.
class QuantileNoise final : public dist::NoiseSource {
 public:
  explicit QuantileNoise(std::vector<double> uniforms) : u_(std::move(uniforms)) {}

  static QuantileNoise random(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.02, 0.98);
    std::vector<double> u(n);
    for (auto& x : u) x = unif(rng);
    return QuantileNoise(std::move(u));
  }

  double standard_normal() override { return std::sqrt(2.0) * boost::math::erf_inv(2.0 * next() - 1.0); }
  double standard_gamma(double shape) override { return boost::math::gamma_p_inv(shape, next()); }

  void rewind() { i_ = 0; }
  std::size_t used() const { return i_; }

 private:
  double next() { return u_.at(i_++); }

  std::vector<double> u_;
  std::size_t i_ = 0;
};

inline double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double standard_error(const std::vector<double>& x) {
  const double m = mean_of(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
}

}  // namespace sacbeta::tsupport
