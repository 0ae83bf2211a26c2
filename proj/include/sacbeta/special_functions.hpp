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

#include <cmath>
#include <stdexcept>
#include <string>

namespace sacbeta::special {

// Raised when an argument is outside a function's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when an iterative routine fails to converge or an intermediate
// quantity under/overflows in a way that makes the result meaningless.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Forward-mode dual number carrying a single tangent direction.
///
/// Used to differentiate the incomplete gamma routines with respect to the
/// shape parameter; the tangent of every constant is zero.
struct Dual {
  double value = 0.0;
  double deriv = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double v) : value(v) {}  // NOLINT: implicit lift of constants
  constexpr Dual(double v, double d) : value(v), deriv(d) {}

  Dual& operator+=(const Dual& o) {
    value += o.value;
    deriv += o.deriv;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    value -= o.value;
    deriv -= o.deriv;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    deriv = deriv * o.value + value * o.deriv;
    value *= o.value;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    deriv = (deriv * o.value - value * o.deriv) / (o.value * o.value);
    value /= o.value;
    return *this;
  }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }
inline Dual operator-(const Dual& a) { return {-a.value, -a.deriv}; }

inline Dual exp(const Dual& a) {
  const double e = std::exp(a.value);
  return {e, e * a.deriv};
}
inline Dual log(const Dual& a) { return {std::log(a.value), a.deriv / a.value}; }
inline Dual pow(const Dual& a, double p) {
  return {std::pow(a.value, p), p * std::pow(a.value, p - 1.0) * a.deriv};
}
// x^a with a constant base and dual exponent.
inline Dual pow(double x, const Dual& a) {
  const double v = std::pow(x, a.value);
  return {v, v * std::log(x) * a.deriv};
}

/// ln Γ(x) for x > 0.
double log_gamma(double x);

/// ψ(x) = d/dx ln Γ(x) for x > 0.
double digamma(double x);

/// ln Γ lifted to dual numbers; the tangent is ψ(a)·a'.
Dual log_gamma(const Dual& a);

/// Regularized lower incomplete gamma P(a, x) = γ(a, x) / Γ(a).
///
/// Uses the power series for x < a + 1 and the Lentz continued fraction for
/// the complement otherwise.
double reg_inc_gamma_p(double a, double x);

/// Q(a, x) = 1 - P(a, x), accurate in the upper tail.
double reg_inc_gamma_q(double a, double x);

/// P(a, x) evaluated in dual arithmetic. The returned tangent is
/// ∂P/∂a · a.deriv, obtained by running the same series / continued fraction
/// on dual numbers.
Dual reg_inc_gamma_p_dual(const Dual& a, double x);

/// Inverse of P(a, ·): returns x with P(a, x) = p.
double inv_reg_inc_gamma_p(double a, double p);

/// Log density of Gamma(a, 1) at x > 0, i.e. ∂P(a, x)/∂x in log space.
double gamma_log_density(double a, double x);

}  // namespace sacbeta::special
