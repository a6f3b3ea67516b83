// Copyright 2026 The qnoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QNOISE_SPECIAL_FUNCTIONS_HPP
#define QNOISE_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qnoise/errors.hpp"

namespace qnoise {

inline double log_factorial(double n) { return std::lgamma(n + 1.0); }

inline double log_binomial(double n, double k) {
  if (k < 0.0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// log(exp(a) + exp(b)) without overflow.
inline double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

/// Legendre polynomial P_n(x) by upward three-term recurrence.
inline double legendre_p(int n, double x) {
  if (n < 0) throw DomainError("Legendre degree must be >= 0");
  double p0 = 1.0, p1 = x;
  if (n == 0) return p0;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// S_n = t^n P_n(u / t) with t = sqrt(d), as polynomials in (u, d).
/// Valid for either sign of d; reduces to the plain recurrence when d = 1.
inline std::vector<double> scaled_legendre_sequence(double u, double d, int n_max) {
  std::vector<double> s(static_cast<size_t>(n_max) + 1, 0.0);
  s[0] = 1.0;
  if (n_max >= 1) s[1] = u;
  for (int n = 2; n <= n_max; ++n) {
    s[n] = ((2.0 * n - 1.0) * u * s[n - 1] - (n - 1.0) * d * s[n - 2]) / n;
  }
  return s;
}

struct SeriesResult {
  double value = 0.0;
  long terms = 0;
  double tail_bound = 0.0;
};

/// Gauss 2F1(a, b; c; z) by direct summation, |z| < 1.
inline SeriesResult hyp2f1_series(double a, double b, double c, double z, long max_terms = 100000,
                                  double rel_tol = 1e-15) {
  if (!(std::abs(z) < 1.0)) throw DomainError("2F1 series requires |z| < 1, got z=" + std::to_string(z));
  if (c <= 0.0 && c == std::floor(c)) throw DomainError("2F1 undefined for nonpositive integer c");
  double term = 1.0, sum = 1.0;
  for (long k = 0; k < max_terms; ++k) {
    const double r = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    term *= r;
    sum += term;
    if (term == 0.0) return {sum, k + 1, 0.0};
    const double rn = std::abs((a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2.0)) * z);
    const double rnn = std::abs((a + k + 2) * (b + k + 2) / ((c + k + 2) * (k + 3.0)) * z);
    // Ratios that still rise approach |z| from below when a + b - c - 1 <= 0.
    const double rho = rnn <= rn ? rn : (a + b - c - 1.0 <= 0.0 ? std::abs(z) : 2.0);
    if (rho < 1.0) {
      const double bound = std::abs(term) * rho / (1.0 - rho);
      if (bound < rel_tol * std::abs(sum)) return {sum, k + 1, bound};
    }
  }
  throw ConvergenceError("2F1 series not converged after " + std::to_string(max_terms) +
                         " terms (a=" + std::to_string(a) + ", b=" + std::to_string(b) +
                         ", z=" + std::to_string(z) + ")");
}

/// log 2F1(a, b; c; z) for a, b, c > 0 and 0 <= z < 1, summed in the log domain.
inline SeriesResult log_hyp2f1_series(double a, double b, double c, double z, long max_terms = 100000,
                                      double rel_tol = 1e-15) {
  if (!(z >= 0.0 && z < 1.0)) throw DomainError("log-domain 2F1 requires 0 <= z < 1, got z=" + std::to_string(z));
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw DomainError("log-domain 2F1 requires positive parameters");
  if (z == 0.0) return {0.0, 0, 0.0};
  const double lz = std::log(z);
  double lt = 0.0, ls = 0.0;
  for (long k = 0; k < max_terms; ++k) {
    lt += std::log((a + k) * (b + k) / ((c + k) * (k + 1.0))) + lz;
    ls = log_add(ls, lt);
    const double rn = (a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2.0)) * z;
    const double rnn = (a + k + 2) * (b + k + 2) / ((c + k + 2) * (k + 3.0)) * z;
    if (rn < 1.0 && rnn <= rn) {
      const double lbound = lt + std::log(rn / (1.0 - rn));
      if (lbound - ls < std::log(rel_tol)) return {ls, k + 1, std::exp(lbound - ls)};
    }
  }
  throw ConvergenceError("2F1 series not converged after " + std::to_string(max_terms) +
                         " terms (a=" + std::to_string(a) + ", b=" + std::to_string(b) +
                         ", z=" + std::to_string(z) + ")");
}

}  // namespace qnoise

#endif
