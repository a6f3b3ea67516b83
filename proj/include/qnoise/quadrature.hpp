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

#ifndef QNOISE_QUADRATURE_HPP
#define QNOISE_QUADRATURE_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <string>

#include "qnoise/errors.hpp"

namespace qnoise {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

/// Integral of f over the real line via omega = scale * tan(u), adaptive Gauss-Kronrod in u.
inline QuadratureResult integrate_real_line(const std::function<double(double)> &f, double scale,
                                            double rel_tol = 1e-8, unsigned max_depth = 20) {
  if (!(scale > 0.0)) throw DomainError("quadrature scale must be positive");
  constexpr double kHalfPi = 1.57079632679489661923;
  auto g = [&](double u) {
    const double c = std::cos(u);
    if (c <= 0.0) return 0.0;
    const double v = f(scale * std::tan(u)) * scale / (c * c);
    if (!std::isfinite(v)) {
      throw ConvergenceError("non-finite integrand at omega=" + std::to_string(scale * std::tan(u)));
    }
    return v;
  };
  QuadratureResult r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, -kHalfPi, kHalfPi, max_depth, rel_tol,
                                                                           &r.error, &r.l1);
  if (!(r.error <= 10.0 * rel_tol * std::abs(r.value)) && r.error > 1e-300) {
    throw ConvergenceError("quadrature did not converge: estimate " + std::to_string(r.value) + ", error " +
                           std::to_string(r.error));
  }
  return r;
}

}  // namespace qnoise

#endif
