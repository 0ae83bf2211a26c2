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

#include "sacbeta/gradcheck/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "sacbeta/special_functions.hpp"

namespace sacbeta::gradcheck {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string label(const char* fmt, double a, double b, double c = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

bool rel_close(double est, double ref, double rtol) { return std::abs(est - ref) <= rtol * std::abs(ref); }

double z_of(double shape, double u) { return special::inv_reg_inc_gamma_p(shape, u); }

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

bool Suite::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const std::vector<double>& gamma_grid_shapes() {
  static const std::vector<double> v{0.5, 1.0, 2.0, 5.0, 20.0};
  return v;
}

const std::vector<double>& gamma_grid_quantiles() {
  static const std::vector<double> v{0.1, 0.5, 0.9};
  return v;
}

double fd_gamma_shape_grad(double shape, double quantile) {
  const double h = 1e-5 * std::max(shape, 1.0);
  return (z_of(shape + h, quantile) - z_of(shape - h, quantile)) / (2.0 * h);
}

Suite gamma_gradient_suite(dist::EstimatorKind kind, double rtol) {
  const auto t0 = Clock::now();
  Suite s{std::string("gamma shape gradient (") + std::string(dist::to_string(kind)) + ")", {}, 0.0};
  for (double a : gamma_grid_shapes()) {
    for (double u : gamma_grid_quantiles()) {
      Check c;
      c.name = label("alpha=%g q=%g", a, u);
      c.reference = fd_gamma_shape_grad(a, u);
      c.estimate = dist::gamma_implicit_grad_shape(a, z_of(a, u), kind);
      c.tolerance = rtol;
      c.pass = rel_close(c.estimate, c.reference, rtol);
      s.checks.push_back(c);
    }
  }
  s.seconds = seconds_since(t0);
  return s;
}

Suite beta_fixed_uniform_suite(dist::EstimatorKind kind, double rtol) {
  const auto t0 = Clock::now();
  Suite s{std::string("beta sample gradient at fixed uniforms (") + std::string(dist::to_string(kind)) + ")", {}, 0.0};
  const double grid[] = {1.5, 3.0, 8.0};
  const double uniforms[][2] = {{0.3, 0.7}, {0.5, 0.5}, {0.8, 0.2}};
  auto draw = [](double a, double b, double u1, double u2) {
    const double z1 = z_of(a, u1), z2 = z_of(b, u2);
    return z1 / (z1 + z2);
  };
  for (double a : grid) {
    for (double b : grid) {
      for (const auto& u : uniforms) {
        const dist::BetaDraw d = dist::beta_from_gammas(a, b, z_of(a, u[0]), z_of(b, u[1]), kind);
        const double ha = 1e-5 * a, hb = 1e-5 * b;
        const double fd_a = (draw(a + ha, b, u[0], u[1]) - draw(a - ha, b, u[0], u[1])) / (2.0 * ha);
        const double fd_b = (draw(a, b + hb, u[0], u[1]) - draw(a, b - hb, u[0], u[1])) / (2.0 * hb);
        Check ca{label("alpha=%g beta=%g u1=%g d/dalpha", a, b, u[0]), d.dvalue_dalpha, fd_a, rtol,
                 rel_close(d.dvalue_dalpha, fd_a, rtol)};
        Check cb{label("alpha=%g beta=%g u1=%g d/dbeta", a, b, u[0]), d.dvalue_dbeta, fd_b, rtol,
                 rel_close(d.dvalue_dbeta, fd_b, rtol)};
        s.checks.push_back(ca);
        s.checks.push_back(cb);
      }
    }
  }
  s.seconds = seconds_since(t0);
  return s;
}

Suite pathwise_expectation_suite(dist::EstimatorKind kind, std::size_t samples, std::uint64_t seed,
                                 double se_multiple) {
  const auto t0 = Clock::now();
  Suite s{std::string("pathwise expectation gradient (") + std::string(dist::to_string(kind)) + ")", {}, 0.0};
  const double params[][2] = {{2.0, 2.0}, {5.0, 1.5}, {1.2, 4.0}};
  std::mt19937_64 rng(seed);
  dist::RngNoise noise(rng);
  for (const auto& p : params) {
    const double a = p[0], b = p[1], n = a + b;
    // d/dα and d/dβ of E[z] = a/n and E[z²] = a(a+1)/(n(n+1)).
    const double m2 = a * (a + 1.0) / (n * (n + 1.0));
    const double dlog_m2_common = -1.0 / n - 1.0 / (n + 1.0);
    const double ref[4] = {b / (n * n), -a / (n * n), m2 * (1.0 / a + 1.0 / (a + 1.0) + dlog_m2_common),
                           m2 * dlog_m2_common};
    // Welford accumulators for f'(z)·∂z/∂α, f'(z)·∂z/∂β with f = z and z².
    double mean[4] = {0, 0, 0, 0}, m2acc[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < samples; ++i) {
      const dist::BetaDraw d =
          dist::beta_from_gammas(a, b, noise.standard_gamma(a), noise.standard_gamma(b), kind);
      const double x[4] = {d.dvalue_dalpha, d.dvalue_dbeta, 2.0 * d.value * d.dvalue_dalpha,
                           2.0 * d.value * d.dvalue_dbeta};
      for (int k = 0; k < 4; ++k) {
        const double delta = x[k] - mean[k];
        mean[k] += delta / static_cast<double>(i + 1);
        m2acc[k] += delta * (x[k] - mean[k]);
      }
    }
    const char* names[4] = {"dE[z]/dalpha", "dE[z]/dbeta", "dE[z^2]/dalpha", "dE[z^2]/dbeta"};
    for (int k = 0; k < 4; ++k) {
      const double se = std::sqrt(m2acc[k] / static_cast<double>(samples - 1) / static_cast<double>(samples));
      Check c;
      c.name = label("alpha=%g beta=%g ", a, b) + names[k];
      c.estimate = mean[k];
      c.reference = ref[k];
      c.tolerance = se_multiple * se;
      c.pass = std::abs(mean[k] - ref[k]) <= c.tolerance;
      s.checks.push_back(c);
    }
  }
  s.seconds = seconds_since(t0);
  return s;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_p_value(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double t = d * (sn + 0.12 + 0.11 / sn);
  if (t < 0.2) return 1.0;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    p += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

double beta_cdf(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_norm = special::log_gamma(a + b) - special::log_gamma(a) - special::log_gamma(b);
  auto pdf = [&](double t) {
    if (t <= 0.0 || t >= 1.0) return (t <= 0.0 ? (a == 1.0) : (b == 1.0)) ? std::exp(log_norm) : 0.0;
    return std::exp(log_norm + (a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t));
  };
  // Integrate the shorter tail for accuracy.
  const bool upper = x > 0.5;
  const double lo = upper ? x : 0.0, hi = upper ? 1.0 : x;
  const double fa = pdf(lo), fb = pdf(hi), fm = pdf(0.5 * (lo + hi));
  const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
  const double area = simpson(pdf, lo, hi, fa, fm, fb, whole, 1e-12, 40);
  return upper ? 1.0 - area : area;
}

Suite sampler_ks_suite(std::size_t samples, std::uint64_t seed, double alpha) {
  const auto t0 = Clock::now();
  Suite s{"sampler goodness of fit (KS)", {}, 0.0};
  std::mt19937_64 rng(seed);
  auto add = [&](std::string name, std::vector<double> xs, const std::function<double(double)>& cdf) {
    const double d = ks_statistic(std::move(xs), cdf);
    Check c;
    c.name = std::move(name);
    c.estimate = ks_p_value(d, samples);
    c.reference = d;
    c.tolerance = alpha;
    c.pass = c.estimate >= alpha;
    s.checks.push_back(c);
  };
  for (double shape : {0.5, 1.0, 3.0}) {
    std::vector<double> xs(samples);
    for (auto& x : xs) x = dist::gamma_sample({shape, 1.0}, rng);
    add(label("gamma shape=%g", shape, 0), std::move(xs),
        [shape](double x) { return special::reg_inc_gamma_p(shape, x); });
  }
  {
    // Rate 2 against the exponential CDF.
    std::vector<double> xs(samples);
    for (auto& x : xs) x = dist::gamma_sample({1.0, 2.0}, rng);
    add("gamma shape=1 rate=2 vs exponential", std::move(xs), [](double x) { return -std::expm1(-2.0 * x); });
  }
  dist::RngNoise noise(rng);
  const double params[][2] = {{2.0, 2.0}, {5.0, 1.5}, {1.2, 4.0}};
  for (const auto& p : params) {
    const double a = p[0], b = p[1];
    // Drawn through the policy-facing sampler: raw outputs log(α - 1), log(β - 1).
    dist::BetaParams bp{dist::Vector::Constant(1, std::log(a - 1.0)), dist::Vector::Constant(1, std::log(b - 1.0)), {}};
    std::vector<double> xs(samples);
    for (auto& x : xs) x = dist::beta_rsample(bp, noise, dist::EstimatorKind::ImplicitAD).value(0);
    add(label("beta alpha=%g beta=%g", a, b), std::move(xs), [a, b](double x) { return beta_cdf(x, a, b); });
  }
  s.seconds = seconds_since(t0);
  return s;
}

}  // namespace sacbeta::gradcheck
