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

#ifndef QNOISE_DISTRIBUTED_HPP
#define QNOISE_DISTRIBUTED_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "qnoise/errors.hpp"
#include "qnoise/gaussian_core.hpp"

namespace qnoise {

/// M modes sharing one fully-correlated thermal noise source of strength ch.n_b per mode.
struct CorrelatedChannelSpec {
  int m = 2;
  ChannelParams ch;

  void validate() const {
    detail::require(m >= 1, "mode count must be >= 1");
    detail::require(ch.kappa >= 0.0 && ch.kappa <= 1.0, "correlated channel needs 0 <= kappa <= 1");
    detail::require(ch.n_b >= 0.0 && std::isfinite(ch.n_b), "correlated channel needs n_b >= 0");
  }
};

/// V -> kappa V + (1 - kappa)/2 I + n_b (E (x) I_2), with E the all-ones M x M matrix.
inline GaussianState apply_correlated_channel(const GaussianState &state, const CorrelatedChannelSpec &spec) {
  spec.validate();
  const int dim = static_cast<int>(state.cov().rows());
  if (dim != 2 * spec.m) {
    throw DomainError("state has " + std::to_string(dim / 2) + " modes, channel expects " + std::to_string(spec.m));
  }
  if (spec.m == 1) return apply_channel(state, spec.ch, 0);
  const double k = spec.ch.kappa;
  Eigen::MatrixXd v = k * state.cov() + 0.5 * (1.0 - k) * Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd e = Eigen::MatrixXd::Ones(spec.m, spec.m);
  v += spec.ch.n_b * Eigen::kroneckerProduct(e, Eigen::Matrix2d::Identity()).eval();
  return GaussianState(std::sqrt(k) * state.mean(), v);
}

/// Real orthogonal M x M matrix with first row 1/sqrt(M) (DCT-II basis).
inline Eigen::MatrixXd uniform_interference_matrix(int m) {
  detail::require(m >= 1, "mode count must be >= 1");
  Eigen::MatrixXd o(m, m);
  for (int j = 0; j < m; ++j) {
    o(0, j) = 1.0 / std::sqrt(static_cast<double>(m));
    for (int k = 1; k < m; ++k) {
      o(k, j) = std::sqrt(2.0 / m) * std::cos(3.14159265358979323846 * k * (2 * j + 1) / (2.0 * m));
    }
  }
  return o;
}

/// The passive network O (x) I_2 acting on (q_1, p_1, ..., q_M, p_M).
inline Eigen::MatrixXd uniform_beamsplitter_network(int m) {
  return Eigen::kroneckerProduct(uniform_interference_matrix(m), Eigen::Matrix2d::Identity()).eval();
}

struct ReductionReport {
  int m = 0;
  int n_states = 0;
  double max_deviation = 0.0;            // vs N_{kappa, M n_b} (x) N_{kappa, 0}^(M-1)
  double max_identity_tail_deviation = 0.0;  // vs N_{kappa, M n_b} (x) identity^(M-1)
  double orthogonality_deviation = 0.0;
  double symplectic_deviation = 0.0;
  bool passed = false;
  double tolerance = 1e-12;
};

/// Random M-mode input: independent single-mode squeezers with random angles, then a random passive mix.
inline GaussianState random_squeezed_input(int m, std::mt19937_64 &rng, double max_r = 1.5) {
  std::uniform_real_distribution<double> ur(0.0, max_r), ua(0.0, 2.0 * 3.14159265358979323846);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    const double r = ur(rng), th = ua(rng);
    Eigen::Matrix2d rot;
    rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    const Eigen::Matrix2d d = Eigen::Vector2d(0.5 * std::exp(-2.0 * r), 0.5 * std::exp(2.0 * r)).asDiagonal();
    v.block<2, 2>(2 * i, 2 * i) = rot * d * rot.transpose();
  }
  GaussianState st(v);
  for (int i = 0; i + 1 < m; ++i) {
    st = symplectic_transform(st, SymplecticTransform::beamsplitter(ua(rng)), {i, i + 1});
  }
  return st;
}

/// Checks B N^(M) B^T against the reduced single-mode channel on each test state.
inline ReductionReport verify_reduction(const CorrelatedChannelSpec &spec, const std::vector<GaussianState> &states,
                                        double tol = 1e-12) {
  spec.validate();
  ReductionReport rep;
  rep.m = spec.m;
  rep.tolerance = tol;
  rep.n_states = static_cast<int>(states.size());
  const Eigen::MatrixXd b = uniform_beamsplitter_network(spec.m);
  const int dim = 2 * spec.m;
  rep.orthogonality_deviation = (b * b.transpose() - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff();
  rep.symplectic_deviation = symplectic_deviation(b);
  const ChannelParams reduced{spec.ch.kappa, spec.m * spec.ch.n_b};
  const ChannelParams pure_loss{spec.ch.kappa, 0.0};
  for (const GaussianState &s : states) {
    // Left side: B N^(M) B^-1 applied to s.
    const GaussianState pre = apply_symplectic(s, b.transpose());
    const Eigen::MatrixXd lhs = apply_symplectic(apply_correlated_channel(pre, spec), b).cov();
    GaussianState rhs = apply_channel(s, reduced, 0);
    GaussianState rhs_id = rhs;
    for (int i = 1; i < spec.m; ++i) rhs = apply_channel(rhs, pure_loss, i);
    const double scale = std::max(1.0, lhs.cwiseAbs().maxCoeff());
    rep.max_deviation = std::max(rep.max_deviation, (lhs - rhs.cov()).cwiseAbs().maxCoeff() / scale);
    rep.max_identity_tail_deviation =
        std::max(rep.max_identity_tail_deviation, (lhs - rhs_id.cov()).cwiseAbs().maxCoeff() / scale);
  }
  rep.passed = rep.max_deviation < tol && rep.orthogonality_deviation < tol && rep.symplectic_deviation < tol;
  return rep;
}

}  // namespace qnoise

#endif
