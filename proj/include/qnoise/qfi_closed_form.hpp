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

#ifndef QNOISE_QFI_CLOSED_FORM_HPP
#define QNOISE_QFI_CLOSED_FORM_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>
#include <utility>
#include <vector>

#include "qnoise/errors.hpp"
#include "qnoise/gaussian_core.hpp"

namespace qnoise {

enum class FisherMethod { ClosedForm, GaussianFormula, FockFiniteDifference, DistributionSum, Quadrature, Asymptote };

inline std::string to_string(FisherMethod m) {
  switch (m) {
    case FisherMethod::ClosedForm: return "closed-form";
    case FisherMethod::GaussianFormula: return "gaussian-formula";
    case FisherMethod::FockFiniteDifference: return "fock-finite-difference";
    case FisherMethod::DistributionSum: return "distribution-sum";
    case FisherMethod::Quadrature: return "quadrature";
    case FisherMethod::Asymptote: return "asymptote";
  }
  return "?";
}

/// Fisher information about n_B (per probe mode) with an echo of the inputs.
struct FisherResult {
  double value = 0.0;
  FisherMethod method = FisherMethod::ClosedForm;
  std::vector<std::pair<std::string, double>> params;
  double error_estimate = 0.0;
  bool flagged = false;
  std::string note;

  double param(const std::string &key) const {
    for (const auto &[k, v] : params) {
      if (k == key) return v;
    }
    return std::numeric_limits<double>::quiet_NaN();
  }
};

namespace detail {

inline void check_noise_point(double kappa, double n_b) {
  require(std::isfinite(kappa) && std::isfinite(n_b), "non-finite channel parameters");
  require(kappa >= 0.0, "kappa must be >= 0");
  if (n_b <= 0.0) throw DomainError("Fisher information diverges at n_b <= 0");
  ChannelParams{kappa, n_b}.validate();
  const double d = n_b - (kappa - 1.0);
  if (std::abs(d) < 1e-12) throw DomainError("degenerate denominator n_b - kappa + 1 ~ 0");
  if (d < 0.0) throw DomainError("unphysical: n_b <= kappa - 1");
}

inline FisherResult closed(double v, std::vector<std::pair<std::string, double>> p) {
  if (!std::isfinite(v) || v < 0.0) throw DomainError("closed form produced a non-finite or negative value");
  FisherResult r;
  r.value = v;
  r.params = std::move(p);
  return r;
}

}  // namespace detail

inline FisherResult qfi_vacuum_limit(double n_b) {
  if (!(n_b > 0.0)) throw DomainError("Fisher information diverges at n_b <= 0");
  return detail::closed(1.0 / (n_b * (n_b + 1.0)), {{"n_b", n_b}});
}

inline FisherResult ub_ue(double n_s, double kappa, double n_b) {
  detail::check_noise_point(kappa, n_b);
  detail::require(n_s >= 0.0, "N_S must be >= 0");
  const double d = n_b - (kappa - 1.0);
  const double v = 1.0 / (n_b * (n_b + 1.0)) +
                   kappa * n_s * (2.0 * n_b - (kappa - 1.0)) / (n_b * (n_b + 1.0) * (n_b + 1.0) * d);
  return detail::closed(v, {{"N_S", n_s}, {"kappa", kappa}, {"n_b", n_b}});
}

inline FisherResult ub_tp(double kappa, double n_b) {
  detail::check_noise_point(kappa, n_b);
  return detail::closed(1.0 / (n_b * (n_b - (kappa - 1.0))), {{"kappa", kappa}, {"n_b", n_b}});
}

inline FisherResult ub_combined(double n_s, double kappa, double n_b) {
  FisherResult ue = ub_ue(n_s, kappa, n_b);
  const FisherResult tp = ub_tp(kappa, n_b);
  if (tp.value < ue.value) {
    ue.value = tp.value;
    ue.note = "teleportation branch";
  } else {
    ue.note = "unitary-extension branch";
  }
  return ue;
}

enum class BoundBranch { Combined, UnitaryExtension, Teleportation };

inline FisherResult ub_bound(BoundBranch b, double n_s, double kappa, double n_b) {
  switch (b) {
    case BoundBranch::UnitaryExtension: return ub_ue(n_s, kappa, n_b);
    case BoundBranch::Teleportation: return ub_tp(kappa, n_b);
    case BoundBranch::Combined: break;
  }
  return ub_combined(n_s, kappa, n_b);
}

struct CompoundElement {
  double kappa = 1.0;
  std::function<double(double)> n_b;
  double n_s = 0.0;
  std::function<double(double)> dn_b;  // optional analytic derivative
};

struct CompoundChannelSpec {
  std::vector<CompoundElement> elements;
  double theta = 0.0;
};

namespace detail {

/// Central difference with one Richardson step.
inline double derivative(const std::function<double(double)> &f, double x) {
  const double h = 1e-3 * std::max(std::abs(x), 1e-6);
  auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

}  // namespace detail

inline FisherResult ub_compound(const CompoundChannelSpec &spec) {
  double total = 0.0;
  for (const auto &e : spec.elements) {
    if (!e.n_b) throw DomainError("compound element without n_b(theta)");
    const double nb = e.n_b(spec.theta);
    const double dn = e.dn_b ? e.dn_b(spec.theta) : detail::derivative(e.n_b, spec.theta);
    total += dn * dn * ub_ue(e.n_s, e.kappa, nb).value;
  }
  FisherResult r;
  r.value = total;
  r.params = {{"theta", spec.theta}, {"elements", static_cast<double>(spec.elements.size())}};
  return r;
}

inline FisherResult qfi_sv(double n_s, double kappa, double n_b) {
  detail::check_noise_point(kappa, n_b);
  detail::require(n_s >= 0.0, "N_S must be >= 0");
  const double kn = kappa * n_s;
  const double num = (n_b + 1.0) * (n_b + 1.0) + (n_b + 2.0 * kn) * (n_b + 2.0 * kn) + 2.0 * kn * (kappa + 1.0);
  const double d1 = kn * (2.0 * n_b - (kappa - 1.0)) + n_b * (n_b + 1.0);
  const double d2 = 2.0 * n_b * (n_b + 2.0 * kn + 1.0) - 2.0 * (kappa - 1.0) * kn + 1.0;
  if (std::abs(d1) < 1e-300 || std::abs(d2) < 1e-300) {
    throw DomainError("degenerate squeezed-vacuum denominator");
  }
  return detail::closed(num / (d1 * d2), {{"N_S", n_s}, {"kappa", kappa}, {"n_b", n_b}});
}

inline FisherResult qfi_tmsv(double n_s, double kappa, double n_b) {
  detail::check_noise_point(kappa, n_b);
  detail::require(n_s >= 0.0, "N_S must be >= 0");
  const double a = 2.0 * n_b - (kappa - 1.0);
  const double d = n_b - (kappa - 1.0);
  const double v = (a * n_s + d) / (n_b * d * (a * n_s + n_b + 1.0));
  return detail::closed(v, {{"N_S", n_s}, {"kappa", kappa}, {"n_b", n_b}});
}

/// Closed-form ratio of the TMSV QFI to the vacuum limit.
inline double tmsv_vl_ratio(double n_s, double kappa, double n_b) {
  detail::check_noise_point(kappa, n_b);
  const double a = 2.0 * n_b - (kappa - 1.0);
  return 1.0 + kappa * n_s * a / ((n_b - (kappa - 1.0)) * (a * n_s + n_b + 1.0));
}

// ---------------------------------------------------------------------------
// Gaussian QFI in the annihilation-operator basis.

using CMatrix = Eigen::MatrixXcd;
using LCMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

/// Sigma = T V T^T with T = [[1, i], [1, -i]]/sqrt(2) per mode.
inline CMatrix to_annihilation(const Eigen::MatrixXd &v) {
  const int n = static_cast<int>(v.rows() / 2);
  CMatrix t = CMatrix::Zero(2 * n, 2 * n);
  const double s = 1.0 / std::sqrt(2.0);
  const std::complex<double> i(0.0, 1.0);
  for (int k = 0; k < n; ++k) {
    t(2 * k, 2 * k) = s;
    t(2 * k, 2 * k + 1) = s * i;
    t(2 * k + 1, 2 * k) = s;
    t(2 * k + 1, 2 * k + 1) = -s * i;
  }
  return t * v.cast<std::complex<double>>() * t.transpose();
}

/// (1/2) vec(dS)^T R^{-1} vec(dS) with R = S (x) S + Om (x) Om / 4.
inline FisherResult qfi_gaussian(const CMatrix &sigma, const CMatrix &dsigma) {
  using lc = std::complex<long double>;
  const int d = static_cast<int>(sigma.rows());
  if (d % 2 != 0 || sigma.cols() != d || dsigma.rows() != d || dsigma.cols() != d) {
    throw DomainError("annihilation covariance must be square with even size");
  }
  LCMatrix s = sigma.cast<lc>();
  LCMatrix om = LCMatrix::Zero(d, d);
  for (int k = 0; k < d / 2; ++k) {
    om(2 * k, 2 * k + 1) = 1.0L;
    om(2 * k + 1, 2 * k) = -1.0L;
  }
  LCMatrix r = Eigen::kroneckerProduct(s, s).eval();
  r += Eigen::kroneckerProduct(om, om).eval() * lc(0.25L);
  const LCMatrix ds = dsigma.cast<lc>();
  Eigen::Matrix<lc, Eigen::Dynamic, 1> v = Eigen::Map<const Eigen::Matrix<lc, Eigen::Dynamic, 1>>(ds.data(), d * d);

  FisherResult out;
  out.method = FisherMethod::GaussianFormula;
  out.params = {{"modes", d / 2.0}};
  Eigen::FullPivLU<LCMatrix> lu(r);
  Eigen::Matrix<lc, Eigen::Dynamic, 1> x;
  if (lu.rcond() > 1e-17L) {
    x = lu.solve(v);
    for (int it = 0; it < 2; ++it) x += lu.solve((v - r * x).eval());
  } else {
    Eigen::JacobiSVD<LCMatrix> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-12L);
    x = svd.solve(v);
    out.flagged = true;
    out.note = "singular R: pseudo-inverse used";
  }
  const long double j = 0.5L * (v.transpose() * x)(0).real();
  out.value = static_cast<double>(j);
  if (!std::isfinite(out.value)) throw ConvergenceError("Gaussian QFI evaluation produced a non-finite value");
  if (out.value < 0.0) {
    if (out.value > -1e-9) {
      out.value = 0.0;
    } else {
      throw DomainError("Gaussian QFI is negative: covariance is not physical");
    }
  }
  return out;
}

/// QFI of a state whose covariance derivative in quadrature form is dcov.
inline FisherResult qfi_gaussian(const GaussianState &state, const Eigen::MatrixXd &dcov) {
  return qfi_gaussian(to_annihilation(state.cov()), to_annihilation(dcov));
}

/// Output state of `source` after the channel on mode 0, and dV/dn_B.
inline std::pair<GaussianState, Eigen::MatrixXd> gaussian_family_point(const SourceSpec &source, double kappa,
                                                                       double n_b) {
  const GaussianState out = apply_channel(make_source(source), ChannelParams{kappa, n_b}, 0);
  Eigen::MatrixXd dv = Eigen::MatrixXd::Zero(out.cov().rows(), out.cov().cols());
  dv(0, 0) = dv(1, 1) = 1.0;
  return {out, dv};
}

/// QFI about n_B for any (possibly noisy) source family, via the Gaussian formula.
inline FisherResult qfi_gaussian_source(const SourceSpec &source, double kappa, double n_b) {
  detail::check_noise_point(kappa, n_b);
  auto [st, dv] = gaussian_family_point(source, kappa, n_b);
  FisherResult r = qfi_gaussian(st, dv);
  r.params = {{"gain", source.gain}, {"n_t", source.n_t}, {"kappa", kappa}, {"n_b", n_b}};
  return r;
}

// ---------------------------------------------------------------------------
// Overlap of purified channel outputs.

struct OverlapParams {
  double zeta1 = 1.0;
  double zeta2 = 1.0;
  double xi = 1.0;
  double nu = 1.0;
  double nu_prime = 1.0;
};

inline OverlapParams overlap_params(double n_b, double n_b_prime, double kappa) {
  OverlapParams o;
  o.xi = (n_b + 1.0) * (n_b_prime + 1.0);
  o.nu = n_b - (kappa - 1.0);
  o.nu_prime = n_b_prime - (kappa - 1.0);
  detail::require(o.nu >= 0.0 && o.nu_prime >= 0.0 && n_b >= 0.0 && n_b_prime >= 0.0,
                  "overlap parameters need physical noise values");
  const double sx = std::sqrt(o.xi);
  const double gap = sx - std::sqrt(n_b * n_b_prime);
  o.zeta1 = 1.0 / gap;
  o.zeta2 = (std::sqrt(o.nu * o.nu_prime) * gap + kappa) / (sx * gap);
  return o;
}

/// sum_n p_n zeta1^M zeta2^n for a total-photon distribution p over M channel uses.
inline double overlap_bound(double n_b, double n_b_prime, double kappa, const std::vector<double> &p, int m) {
  detail::require(m >= 1, "number of channel uses must be >= 1");
  const OverlapParams o = overlap_params(n_b, n_b_prime, kappa);
  double s = 0.0, z = 1.0;
  for (size_t n = 0; n < p.size(); ++n) {
    s += p[n] * z;
    z *= o.zeta2;
  }
  return std::pow(o.zeta1, m) * s;
}

}  // namespace qnoise

#endif
