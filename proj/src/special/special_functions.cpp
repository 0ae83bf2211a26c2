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

#include "sacbeta/special_functions.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>

namespace sacbeta::special {
namespace {

constexpr int kMaxTerms = 500;
constexpr double kTolerance = 1e-15;
constexpr double kFpMin = DBL_MIN / DBL_EPSILON;

std::string describe(const char* fn, double a, double x) {
  std::ostringstream os;
  os << fn << "(" << a << ", " << x << ")";
  return os.str();
}

void check_args(const char* fn, double a, double x) {
  if (!std::isfinite(a) || !std::isfinite(x) || a <= 0.0 || x < 0.0) {
    throw DomainError(describe(fn, a, x) + ": requires finite a > 0, x >= 0");
  }
}

inline double value_of(double v) { return v; }
inline double value_of(const Dual& v) { return v.value; }
inline double deriv_of(double) { return 0.0; }
inline double deriv_of(const Dual& v) { return v.deriv; }

inline double lgamma_of(double a) { return log_gamma(a); }
inline Dual lgamma_of(const Dual& a) { return log_gamma(a); }

inline double exp_of(double v) { return std::exp(v); }
inline Dual exp_of(const Dual& v) { return exp(v); }

// Both the value and its tangent must have settled before a term is
// considered negligible; otherwise the derivative would be truncated early.
template <typename T>
bool negligible(const T& term, const T& total) {
  if (std::abs(value_of(term)) >= std::abs(value_of(total)) * kTolerance) return false;
  return std::abs(deriv_of(term)) <=
         std::max(std::abs(deriv_of(total)), std::abs(value_of(total))) * kTolerance;
}

// exp(-x + a ln x - ln Γ(a)), the common prefactor of both expansions.
template <typename T>
T prefactor(const T& a, double x) {
  return exp_of(T(-x) + a * T(std::log(x)) - lgamma_of(a));
}

// P(a, x) by the power series, valid and fast for x < a + 1.
template <typename T>
T lower_series(const T& a, double x) {
  T ap = a;
  T del = T(1.0) / a;
  T sum = del;
  for (int n = 1; n <= kMaxTerms; ++n) {
    ap += T(1.0);
    del *= T(x) / ap;
    sum += del;
    if (negligible(del, sum)) return sum * prefactor(a, x);
  }
  throw NumericalError(describe("reg_inc_gamma_p series", value_of(a), x) +
                       ": no convergence in 500 terms");
}

// Q(a, x) = 1 - P(a, x) by the modified Lentz continued fraction.
template <typename T>
T upper_continued_fraction(const T& a, double x) {
  T b = T(x + 1.0) - a;
  T c = T(1.0 / kFpMin);
  T d = T(1.0) / b;
  T h = d;
  for (int i = 1; i <= kMaxTerms; ++i) {
    const T an = T(-static_cast<double>(i)) * (T(static_cast<double>(i)) - a);
    b += T(2.0);
    d = an * d + b;
    if (std::abs(value_of(d)) < kFpMin) d = T(kFpMin);
    c = b + an / c;
    if (std::abs(value_of(c)) < kFpMin) c = T(kFpMin);
    d = T(1.0) / d;
    const T del = d * c;
    h *= del;
    const double rel_tangent =
        std::max(1.0, std::abs(deriv_of(h)) / std::max(std::abs(value_of(h)), DBL_MIN));
    if (std::abs(value_of(del) - 1.0) < kTolerance &&
        std::abs(deriv_of(del)) <= kTolerance * rel_tangent) {
      return prefactor(a, x) * h;
    }
  }
  throw NumericalError(describe("reg_inc_gamma_p continued fraction", value_of(a), x) +
                       ": no convergence in 500 terms");
}

template <typename T>
T reg_inc_gamma_p_impl(const T& a, double x) {
  if (x == 0.0) return T(0.0);
  if (x < value_of(a) + 1.0) return lower_series(a, x);
  return T(1.0) - upper_continued_fraction(a, x);
}

}  // namespace

double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("log_gamma: requires finite x > 0");
  }
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double digamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("digamma: requires finite x > 0");
  }
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double f = 1.0 / (x * x);
  const double tail =
      f * (1.0 / 12 -
           f * (1.0 / 120 -
                f * (1.0 / 252 -
                     f * (1.0 / 240 - f * (1.0 / 132 - f * (691.0 / 32760 - f / 12))))));
  return result + std::log(x) - 0.5 / x - tail;
}

Dual log_gamma(const Dual& a) { return {log_gamma(a.value), digamma(a.value) * a.deriv}; }

double reg_inc_gamma_p(double a, double x) {
  check_args("reg_inc_gamma_p", a, x);
  return std::clamp(reg_inc_gamma_p_impl(a, x), 0.0, 1.0);
}

double reg_inc_gamma_q(double a, double x) {
  check_args("reg_inc_gamma_q", a, x);
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return std::clamp(1.0 - lower_series(a, x), 0.0, 1.0);
  return std::clamp(upper_continued_fraction(a, x), 0.0, 1.0);
}

Dual reg_inc_gamma_p_dual(const Dual& a, double x) {
  check_args("reg_inc_gamma_p_dual", a.value, x);
  if (!std::isfinite(a.deriv)) {
    throw DomainError("reg_inc_gamma_p_dual: non-finite tangent");
  }
  Dual p = reg_inc_gamma_p_impl(a, x);
  p.value = std::clamp(p.value, 0.0, 1.0);
  return p;
}

double gamma_log_density(double a, double x) {
  if (!std::isfinite(a) || a <= 0.0 || !std::isfinite(x) || x <= 0.0) {
    throw DomainError(describe("gamma_log_density", a, x) + ": requires a > 0, x > 0");
  }
  return (a - 1.0) * std::log(x) - x - log_gamma(a);
}

double inv_reg_inc_gamma_p(double a, double p) {
  if (!std::isfinite(a) || a <= 0.0 || !(p > 0.0 && p < 1.0)) {
    throw DomainError(describe("inv_reg_inc_gamma_p", a, p) + ": requires a > 0, 0 < p < 1");
  }

  // In the upper half the root is found on Q(a, x) = 1 - p, which keeps full
  // relative accuracy as p approaches 1. Either residual increases with x and
  // has derivative equal to the density.
  const bool upper = p > 0.5;
  const double q = 1.0 - p;
  auto residual = [&](double x) { return upper ? q - reg_inc_gamma_q(a, x) : reg_inc_gamma_p(a, x) - p; };

  // Geometric bracketing: residual(lo) <= 0 <= residual(hi) with hi / lo = 2.
  double hi = std::max(a, 1.0);
  while (residual(hi) < 0.0) {
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericalError("inv_reg_inc_gamma_p: upper bracket overflow");
  }
  double lo = hi / 2.0;
  while (residual(lo) > 0.0) {
    hi = lo;
    lo /= 2.0;
    if (lo < DBL_MIN) return lo;  // quantile below the normal range
  }

  // Newton polish on x, falling back to bisection whenever a step leaves the
  // bracket.
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = residual(x);
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double density = std::exp(gamma_log_density(a, x));
    double next = (density > 0.0) ? x - f / density : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * DBL_EPSILON * x || hi - lo <= 4.0 * DBL_EPSILON * hi) {
      return next;
    }
    x = next;
  }
  throw NumericalError(describe("inv_reg_inc_gamma_p", a, p) + ": no convergence in 200 iterations");
}

}  // namespace sacbeta::special
