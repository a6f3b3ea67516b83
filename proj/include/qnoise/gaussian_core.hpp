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

#ifndef QNOISE_GAUSSIAN_CORE_HPP
#define QNOISE_GAUSSIAN_CORE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "qnoise/errors.hpp"

namespace qnoise {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

enum class ChannelKind { ThermalLoss, Awgn, Amplifier };

/// Phase-covariant single-mode channel with transmissivity kappa and added noise n_b.
struct ChannelParams {
  double kappa = 1.0;
  double n_b = 0.0;

  ChannelKind kind() const {
    if (kappa < 1.0) return ChannelKind::ThermalLoss;
    if (kappa == 1.0) return ChannelKind::Awgn;
    return ChannelKind::Amplifier;
  }

  bool physical(double tol = 1e-14) const {
    return std::isfinite(kappa) && std::isfinite(n_b) && kappa >= 0.0 && n_b >= 0.0 &&
           n_b >= kappa - 1.0 - tol;
  }

  void validate() const {
    if (!physical()) {
      throw DomainError("unphysical channel: kappa=" + std::to_string(kappa) +
                        " n_b=" + std::to_string(n_b) + " (need n_b >= max(kappa-1, 0))");
    }
  }
};

enum class SourceKind { Vacuum, SqueezedVacuum, Tmsv };

inline std::string to_string(SourceKind k) {
  switch (k) {
    case SourceKind::Vacuum: return "vacuum";
    case SourceKind::SqueezedVacuum: return "sv";
    case SourceKind::Tmsv: return "tmsv";
  }
  return "?";
}

/// Probe family. gain is G = exp(2r); n_t is thermal contamination of the squeezer input.
struct SourceSpec {
  SourceKind kind = SourceKind::Vacuum;
  double gain = 1.0;
  double n_t = 0.0;

  /// Gain giving mean photon number n_s for a pure (n_t = 0) source.
  static double gain_for_photons(double n_s) {
    detail::require(n_s >= 0.0, "photon number must be nonnegative");
    return 1.0 + 2.0 * n_s + 2.0 * std::sqrt(n_s * (n_s + 1.0));
  }

  static SourceSpec from_photons(SourceKind kind, double n_s, double n_t = 0.0) {
    return SourceSpec{kind, kind == SourceKind::Vacuum ? 1.0 : gain_for_photons(n_s), n_t};
  }

  void validate() const {
    detail::require(std::isfinite(gain) && gain >= 1.0, "source gain must be >= 1");
    detail::require(std::isfinite(n_t) && n_t >= 0.0, "source n_t must be >= 0");
    detail::require(kind != SourceKind::Vacuum || gain == 1.0, "vacuum source takes gain 1");
  }

  double squeeze_r() const { return 0.5 * std::log(gain); }
  double gain_db() const { return linear_to_db(gain); }

  /// Mean photon number per signal mode including thermal contamination.
  double signal_photons() const {
    const double g = gain;
    return (2.0 * (g * g + 1.0) * n_t + (g - 1.0) * (g - 1.0)) / (4.0 * g);
  }

  /// Photon number of the squeezing alone, (G-1)^2/(4G).
  double pure_photons() const { return (gain - 1.0) * (gain - 1.0) / (4.0 * gain); }
};

struct ChannelOutputParams {
  double mu = 0.0;
  double nu = 1.0;

  static ChannelOutputParams from(const ChannelParams &ch, double n_t) {
    return {4.0 * ch.n_b + 2.0 * (1.0 - ch.kappa), 2.0 * n_t + 1.0};
  }
};

/// Quadrature symplectic form over n modes, ordering (q1, p1, ..., qn, pn).
inline Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd om = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int i = 0; i < n_modes; ++i) {
    om(2 * i, 2 * i + 1) = 1.0;
    om(2 * i + 1, 2 * i) = -1.0;
  }
  return om;
}

/// Zero-or-displaced Gaussian state; vacuum covariance is I/2.
class GaussianState {
 public:
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    if (cov_.rows() != cov_.cols() || cov_.rows() % 2 != 0 || cov_.rows() == 0 ||
        mean_.size() != cov_.rows()) {
      throw DomainError("covariance must be 2M x 2M with matching mean");
    }
    const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, cov_.cwiseAbs().maxCoeff())) {
      throw DomainError("covariance is not symmetric");
    }
    cov_ = 0.5 * (cov_ + cov_.transpose());
  }

  explicit GaussianState(const Eigen::MatrixXd &cov) : GaussianState(Eigen::VectorXd::Zero(cov.rows()), cov) {}

  static GaussianState vacuum(int n_modes) {
    return GaussianState(0.5 * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
  }

  static GaussianState thermal(double n) {
    return GaussianState((n + 0.5) * Eigen::MatrixXd::Identity(2, 2));
  }

  int n_modes() const { return static_cast<int>(cov_.rows() / 2); }
  const Eigen::VectorXd &mean() const { return mean_; }
  const Eigen::MatrixXd &cov() const { return cov_; }

  Eigen::Matrix2d mode_block(int i, int j) const { return cov_.block<2, 2>(2 * i, 2 * j); }
  Eigen::Matrix2d mode_block(int i) const { return mode_block(i, i); }

  double photon_number(int mode) const {
    check_mode(mode);
    const auto b = mode_block(mode);
    const double m2 = mean_.segment<2>(2 * mode).squaredNorm();
    return 0.5 * (b(0, 0) + b(1, 1) + m2) - 0.5;
  }

  /// Smallest eigenvalue of cov + (i/2) Omega; nonnegative for physical states.
  double min_uncertainty_eigenvalue() const {
    Eigen::MatrixXcd h = cov_.cast<std::complex<double>>();
    h += std::complex<double>(0.0, 0.5) * symplectic_form(n_modes()).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  bool satisfies_uncertainty(double tol = 1e-10) const { return min_uncertainty_eigenvalue() >= -tol; }

  /// Tensor product, this state's modes first.
  GaussianState tensor(const GaussianState &other) const {
    const auto a = cov_.rows(), b = other.cov_.rows();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(a + b, a + b);
    c.topLeftCorner(a, a) = cov_;
    c.bottomRightCorner(b, b) = other.cov_;
    Eigen::VectorXd m(a + b);
    m << mean_, other.mean_;
    return GaussianState(m, c);
  }

  void check_mode(int mode) const {
    if (mode < 0 || mode >= n_modes()) {
      throw DomainError("mode index " + std::to_string(mode) + " out of range");
    }
  }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

inline GaussianState make_source(const SourceSpec &spec) {
  spec.validate();
  const double g = spec.gain, nu = 2.0 * spec.n_t + 1.0;
  switch (spec.kind) {
    case SourceKind::Vacuum:
      return GaussianState((nu / 2.0) * Eigen::MatrixXd::Identity(2, 2));
    case SourceKind::SqueezedVacuum: {
      Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, 2);
      v(0, 0) = g * nu / 2.0;
      v(1, 1) = nu / (2.0 * g);
      return GaussianState(v);
    }
    case SourceKind::Tmsv: {
      const double a = (g * g + 1.0) * nu / (4.0 * g);
      const double c = (g * g - 1.0) * nu / (4.0 * g);
      Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 4);
      v.diagonal().setConstant(a);
      v(0, 2) = v(2, 0) = c;
      v(1, 3) = v(3, 1) = -c;
      return GaussianState(v);
    }
  }
  throw DomainError("unknown source kind");
}

/// V -> kappa V + (mu/4) I on the probed block, sqrt(kappa) on its cross blocks and mean.
inline GaussianState apply_channel(const GaussianState &state, const ChannelParams &ch, int mode) {
  ch.validate();
  state.check_mode(mode);
  const double sk = std::sqrt(ch.kappa);
  const double add = ch.n_b + 0.5 * (1.0 - ch.kappa);
  Eigen::MatrixXd v = state.cov();
  Eigen::VectorXd m = state.mean();
  const int r = 2 * mode;
  v.middleRows(r, 2) *= sk;
  v.middleCols(r, 2) *= sk;
  v(r, r) += add;
  v(r + 1, r + 1) += add;
  m.segment<2>(r) *= sk;
  return GaussianState(m, v);
}

struct ChannelDecomposition {
  double eta = 1.0;  // quantum-limited loss transmissivity, applied first
  double g = 1.0;    // quantum-limited amplifier gain
};

inline ChannelDecomposition decompose_channel(const ChannelParams &ch) {
  ch.validate();
  const double g = 1.0 + ch.n_b;
  return {std::min(1.0, ch.kappa / g), g};
}

inline GaussianState apply_loss(const GaussianState &s, double eta, int mode) {
  detail::require(eta >= 0.0 && eta <= 1.0, "loss transmissivity must lie in [0, 1]");
  return apply_channel(s, ChannelParams{eta, 0.0}, mode);
}

inline GaussianState apply_amplifier(const GaussianState &s, double g, int mode) {
  detail::require(g >= 1.0, "amplifier gain must be >= 1");
  return apply_channel(s, ChannelParams{g, g - 1.0}, mode);
}

struct SymplecticTransform {
  enum class Kind { Beamsplitter, SingleModeSqueeze, TwoModeSqueeze };
  Kind kind;
  double param;

  static SymplecticTransform beamsplitter(double theta) { return {Kind::Beamsplitter, theta}; }
  static SymplecticTransform single_mode_squeeze(double r) { return {Kind::SingleModeSqueeze, r}; }
  static SymplecticTransform two_mode_squeeze(double r) { return {Kind::TwoModeSqueeze, r}; }

  int arity() const { return kind == Kind::SingleModeSqueeze ? 1 : 2; }
};

/// Local symplectic matrix of the transform (2x2 or 4x4).
inline Eigen::MatrixXd local_symplectic(const SymplecticTransform &t) {
  using K = SymplecticTransform::Kind;
  const double x = t.param;
  if (t.kind == K::SingleModeSqueeze) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2, 2);
    s(0, 0) = std::exp(x);
    s(1, 1) = std::exp(-x);
    return s;
  }
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(4, 4);
  if (t.kind == K::Beamsplitter) {
    const double c = std::cos(x), sn = std::sin(x);
    s.topLeftCorner(2, 2) = c * Eigen::Matrix2d::Identity();
    s.topRightCorner(2, 2) = sn * Eigen::Matrix2d::Identity();
    s.bottomLeftCorner(2, 2) = -sn * Eigen::Matrix2d::Identity();
    s.bottomRightCorner(2, 2) = c * Eigen::Matrix2d::Identity();
  } else {
    const double c = std::cosh(x), sh = std::sinh(x);
    Eigen::Matrix2d z;
    z << 1.0, 0.0, 0.0, -1.0;
    s.topLeftCorner(2, 2) = c * Eigen::Matrix2d::Identity();
    s.bottomRightCorner(2, 2) = c * Eigen::Matrix2d::Identity();
    s.topRightCorner(2, 2) = sh * z;
    s.bottomLeftCorner(2, 2) = sh * z;
  }
  return s;
}

/// Embeds the local transform acting on `modes` into the full n-mode space.
inline Eigen::MatrixXd symplectic_matrix(const SymplecticTransform &t, int n_modes,
                                         const std::vector<int> &modes) {
  if (static_cast<int>(modes.size()) != t.arity()) throw DomainError("wrong number of modes for transform");
  for (int m : modes) {
    if (m < 0 || m >= n_modes) throw DomainError("transform mode index out of range");
  }
  if (modes.size() == 2 && modes[0] == modes[1]) throw DomainError("transform modes must be distinct");
  const Eigen::MatrixXd loc = local_symplectic(t);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  for (size_t a = 0; a < modes.size(); ++a) {
    for (size_t b = 0; b < modes.size(); ++b) {
      s.block<2, 2>(2 * modes[a], 2 * modes[b]) = loc.block<2, 2>(2 * a, 2 * b);
    }
  }
  return s;
}

inline GaussianState apply_symplectic(const GaussianState &state, const Eigen::MatrixXd &s) {
  if (s.rows() != state.cov().rows() || s.cols() != s.rows()) throw DomainError("symplectic size mismatch");
  return GaussianState(s * state.mean(), s * state.cov() * s.transpose());
}

inline GaussianState symplectic_transform(const GaussianState &state, const SymplecticTransform &t,
                                          const std::vector<int> &modes) {
  return apply_symplectic(state, symplectic_matrix(t, state.n_modes(), modes));
}

/// max-abs entry of S Omega S^T - Omega.
inline double symplectic_deviation(const Eigen::MatrixXd &s) {
  const Eigen::MatrixXd om = symplectic_form(static_cast<int>(s.rows() / 2));
  return (s * om * s.transpose() - om).cwiseAbs().maxCoeff();
}

}  // namespace qnoise

#endif
