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

#ifndef QNOISE_FOCK_ORACLE_HPP
#define QNOISE_FOCK_ORACLE_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "qnoise/errors.hpp"
#include "qnoise/gaussian_core.hpp"
#include "qnoise/qfi_closed_form.hpp"
#include "qnoise/special_functions.hpp"

namespace qnoise {

// All states reachable in this oracle (pure squeezed sources, phase-covariant
// channels, real squeezers) have real number-basis matrices, so storage is real.

/// Truncated number-basis density matrix. Two-mode index is n_signal * cutoff + n_idler.
struct FockDensityMatrix {
  int cutoff = 1;
  int n_modes = 1;
  Eigen::MatrixXd matrix;
  double tail_mass = 0.0;

  int dim() const { return n_modes == 1 ? cutoff : cutoff * cutoff; }
  int index(int n_signal, int n_idler) const { return n_signal * cutoff + n_idler; }
  double trace() const { return matrix.trace(); }

  Eigen::VectorXd diagonal() const { return matrix.diagonal(); }

  /// Photon-number distribution of one mode.
  Eigen::VectorXd marginal(int mode) const {
    if (n_modes == 1) return matrix.diagonal();
    Eigen::VectorXd p = Eigen::VectorXd::Zero(cutoff);
    for (int n = 0; n < cutoff; ++n) {
      for (int m = 0; m < cutoff; ++m) p(mode == 0 ? n : m) += matrix(index(n, m), index(n, m));
    }
    return p;
  }

  double mean_photons(int mode) const {
    const Eigen::VectorXd p = marginal(mode);
    double s = 0.0;
    for (int n = 0; n < cutoff; ++n) s += n * p(n);
    return s;
  }

  /// Copy with a larger cutoff, zero-padded.
  FockDensityMatrix padded(int new_cutoff) const {
    if (new_cutoff <= cutoff) return *this;
    FockDensityMatrix out{new_cutoff, n_modes, Eigen::MatrixXd::Zero(0, 0), tail_mass};
    out.matrix = Eigen::MatrixXd::Zero(out.dim(), out.dim());
    if (n_modes == 1) {
      out.matrix.topLeftCorner(cutoff, cutoff) = matrix;
    } else {
      for (int i = 0; i < dim(); ++i) {
        for (int j = 0; j < dim(); ++j) {
          out.matrix(out.index(i / cutoff, i % cutoff), out.index(j / cutoff, j % cutoff)) = matrix(i, j);
        }
      }
    }
    return out;
  }
};

// Two-mode dense matrices grow as cutoff^4; 80 per mode is about 330 MB.
inline constexpr int kMaxTwoModeCutoff = 80;

struct FockOptions {
  double tail_tolerance = 1e-12;
  int max_cutoff = 400;
};

namespace detail {

/// log |amplitude|^2 of level n for a pure source; -inf when the level is empty.
inline double log_source_weight(const SourceSpec &spec, int n) {
  const double r = spec.squeeze_r();
  const double ninf = -std::numeric_limits<double>::infinity();
  switch (spec.kind) {
    case SourceKind::Vacuum: return n == 0 ? 0.0 : ninf;
    case SourceKind::SqueezedVacuum: {
      if (n % 2 != 0) return ninf;
      if (r == 0.0) return n == 0 ? 0.0 : ninf;
      const int m = n / 2;
      return 2.0 * m * std::log(std::tanh(r)) + log_factorial(2.0 * m) - 2.0 * m * std::log(2.0) -
             2.0 * log_factorial(m) - std::log(std::cosh(r));
    }
    case SourceKind::Tmsv:
      if (r == 0.0) return n == 0 ? 0.0 : ninf;
      return 2.0 * n * std::log(std::tanh(r)) - 2.0 * std::log(std::cosh(r));
  }
  return ninf;
}

/// Exact mass above level cutoff - 1 of the pure source's photon distribution.
inline double source_tail(const SourceSpec &spec, int cutoff) {
  const double r = spec.squeeze_r();
  if (spec.kind == SourceKind::Vacuum || r == 0.0) return 0.0;
  if (spec.kind == SourceKind::Tmsv) return std::pow(std::tanh(r), 2.0 * cutoff);
  double s = 0.0;
  for (int n = cutoff + (cutoff % 2); ; n += 2) {
    const double w = std::exp(log_source_weight(spec, n));
    s += w;
    if (w < 1e-18 * s || w == 0.0 || n > 1000000) break;
  }
  return s;
}

}  // namespace detail

/// Smallest cutoff with source tail below tol.
inline int cutoff_for_tail(const SourceSpec &spec, double tol, int max_cutoff = 4000) {
  for (int d = 1; d <= max_cutoff; ++d) {
    if (detail::source_tail(spec, d) < tol) return d;
  }
  throw ConvergenceError("no cutoff up to " + std::to_string(max_cutoff) + " reaches tail " + std::to_string(tol));
}

inline FockDensityMatrix fock_from_source(const SourceSpec &spec, int cutoff, double tail_tolerance = 1e-12) {
  spec.validate();
  if (spec.n_t != 0.0) throw DomainError("Fock oracle supports pure sources only (n_t = 0)");
  detail::require(cutoff >= 1, "cutoff must be >= 1");
  const double tail = detail::source_tail(spec, cutoff);
  if (tail > tail_tolerance) {
    std::ostringstream msg;
    msg << "cutoff " << cutoff << " leaves source tail mass " << tail << " above tolerance " << tail_tolerance;
    throw ConvergenceError(msg.str());
  }
  FockDensityMatrix rho;
  rho.cutoff = cutoff;
  rho.n_modes = spec.kind == SourceKind::Tmsv ? 2 : 1;
  rho.tail_mass = tail;
  const int d = rho.dim();
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(d);
  for (int n = 0; n < cutoff; ++n) {
    const double lw = detail::log_source_weight(spec, n);
    if (!std::isfinite(lw)) continue;
    psi(rho.n_modes == 1 ? n : rho.index(n, n)) = std::exp(0.5 * lw);
  }
  psi /= psi.norm();
  rho.matrix = psi * psi.transpose();
  return rho;
}

inline FockDensityMatrix fock_thermal(double n_mean, int cutoff) {
  detail::require(n_mean >= 0.0 && cutoff >= 1, "thermal state needs n >= 0 and cutoff >= 1");
  FockDensityMatrix rho;
  rho.cutoff = cutoff;
  rho.matrix = Eigen::MatrixXd::Zero(cutoff, cutoff);
  const double q = n_mean / (1.0 + n_mean);
  double s = 0.0;
  for (int n = 0; n < cutoff; ++n) {
    rho.matrix(n, n) = std::pow(q, n) / (1.0 + n_mean);
    s += rho.matrix(n, n);
  }
  rho.tail_mass = 1.0 - s;
  rho.matrix /= s;
  return rho;
}

inline FockDensityMatrix fock_number(int n, int cutoff) {
  detail::require(n >= 0 && n < cutoff, "number state outside cutoff");
  FockDensityMatrix rho;
  rho.cutoff = cutoff;
  rho.matrix = Eigen::MatrixXd::Zero(cutoff, cutoff);
  rho.matrix(n, n) = 1.0;
  return rho;
}

/// E |n> = coeffs[n] |n + shift>, entries landing outside the cutoff dropped.
struct KrausOperator {
  int shift = 0;
  std::vector<double> coeffs;

  Eigen::MatrixXd dense(int cutoff) const {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(cutoff, cutoff);
    for (int n = 0; n < cutoff && n < static_cast<int>(coeffs.size()); ++n) {
      const int m = n + shift;
      if (m >= 0 && m < cutoff) e(m, n) = coeffs[n];
    }
    return e;
  }
};

enum class KrausKind { Loss, Amplifier };

struct KrausSet {
  KrausKind kind = KrausKind::Loss;
  double param = 1.0;  // eta or g
  int cutoff = 1;
  std::vector<KrausOperator> operators;

  /// max_n<levels |(sum_k E_k^T E_k)_{nn} - 1|; the sum is diagonal for these sets.
  double completeness_deviation(int levels) const {
    double worst = 0.0;
    for (int n = 0; n < std::min(levels, cutoff); ++n) {
      double s = 0.0;
      for (const auto &op : operators) {
        const int m = n + op.shift;
        if (m >= 0 && m < cutoff) s += op.coeffs[n] * op.coeffs[n];
      }
      worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
  }
};

inline KrausSet loss_kraus(double eta, int cutoff) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("loss transmissivity must lie in [0, 1]");
  KrausSet ks{KrausKind::Loss, eta, cutoff, {}};
  const int kmax = eta == 1.0 ? 0 : cutoff - 1;
  for (int k = 0; k <= kmax; ++k) {
    KrausOperator op{-k, std::vector<double>(cutoff, 0.0)};
    for (int n = k; n < cutoff; ++n) {
      double lw = log_binomial(n, k);
      if (k > 0) lw += k * std::log1p(-eta);
      if (n - k > 0) lw += (n - k) * std::log(eta);
      op.coeffs[n] = (eta == 0.0 && n - k > 0) ? 0.0 : std::exp(0.5 * lw);
    }
    ks.operators.push_back(std::move(op));
  }
  return ks;
}

inline KrausSet amplifier_kraus(double g, int cutoff) {
  if (!(g >= 1.0)) throw DomainError("amplifier gain must be >= 1");
  KrausSet ks{KrausKind::Amplifier, g, cutoff, {}};
  const int lmax = g == 1.0 ? 0 : cutoff - 1;
  const double lx = std::log1p(-1.0 / g), lg = std::log(g);
  for (int l = 0; l <= lmax; ++l) {
    KrausOperator op{l, std::vector<double>(cutoff, 0.0)};
    for (int n = 0; n + l < cutoff; ++n) {
      double lw = log_binomial(l + n, l) - (n + 1.0) * lg;
      if (l > 0) lw += l * lx;
      op.coeffs[n] = std::exp(0.5 * lw);
    }
    ks.operators.push_back(std::move(op));
  }
  return ks;
}

inline std::pair<KrausSet, KrausSet> kraus_channel(const ChannelParams &ch, int cutoff) {
  const ChannelDecomposition dc = decompose_channel(ch);
  return {loss_kraus(dc.eta, cutoff), amplifier_kraus(dc.g, cutoff)};
}

/// rho -> sum_k E_k rho E_k^T on `mode`; returns the output without renormalization.
inline Eigen::MatrixXd apply_kraus_raw(const FockDensityMatrix &rho, const KrausSet &ks, int mode) {
  const int d = rho.cutoff;
  if (ks.cutoff != d) throw DomainError("Kraus cutoff does not match the state");
  if (mode < 0 || mode >= rho.n_modes) throw DomainError("Kraus mode out of range");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rho.dim(), rho.dim());
  if (rho.n_modes == 1) {
    for (const auto &op : ks.operators) {
      for (int n = 0; n < d; ++n) {
        const int np = n + op.shift;
        if (np < 0 || np >= d || op.coeffs[n] == 0.0) continue;
        for (int m = 0; m < d; ++m) {
          const int mp = m + op.shift;
          if (mp < 0 || mp >= d || op.coeffs[m] == 0.0) continue;
          out(np, mp) += op.coeffs[n] * op.coeffs[m] * rho.matrix(n, m);
        }
      }
    }
    return out;
  }
  // Two modes: operate on d x d sub-blocks indexed by the acted-on mode.
  auto block_of = [&](Eigen::MatrixXd &m, int a, int b) -> Eigen::Block<Eigen::MatrixXd> {
    return m.block(a * d, b * d, d, d);
  };
  Eigen::MatrixXd src = rho.matrix;
  if (mode == 1) {
    // Reorder to put the acted-on mode first.
    Eigen::MatrixXd t(rho.dim(), rho.dim());
    for (int i = 0; i < rho.dim(); ++i) {
      for (int j = 0; j < rho.dim(); ++j) t((i % d) * d + i / d, (j % d) * d + j / d) = src(i, j);
    }
    src = t;
  }
  std::vector<char> nonzero(static_cast<size_t>(d) * d, 0);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) nonzero[a * d + b] = block_of(src, a, b).cwiseAbs().maxCoeff() > 0.0;
  }
  for (const auto &op : ks.operators) {
    for (int n = 0; n < d; ++n) {
      const int np = n + op.shift;
      if (np < 0 || np >= d || op.coeffs[n] == 0.0) continue;
      for (int m = 0; m < d; ++m) {
        const int mp = m + op.shift;
        if (mp < 0 || mp >= d || op.coeffs[m] == 0.0 || !nonzero[n * d + m]) continue;
        block_of(out, np, mp) += (op.coeffs[n] * op.coeffs[m]) * block_of(src, n, m);
      }
    }
  }
  if (mode == 1) {
    Eigen::MatrixXd t(rho.dim(), rho.dim());
    for (int i = 0; i < rho.dim(); ++i) {
      for (int j = 0; j < rho.dim(); ++j) t((i % d) * d + i / d, (j % d) * d + j / d) = out(i, j);
    }
    out = t;
  }
  return out;
}

/// Amplifier after loss on the signal mode (mode 0); enlarges the cutoff if the amplifier leaks.
inline FockDensityMatrix apply_channel_fock(const FockDensityMatrix &rho_in, const ChannelParams &ch,
                                            const FockOptions &opt = {}) {
  ch.validate();
  FockDensityMatrix rho = rho_in;
  const double tr_in = rho.trace();
  while (true) {
    const auto [loss, amp] = kraus_channel(ch, rho.cutoff);
    FockDensityMatrix mid = rho;
    mid.matrix = apply_kraus_raw(rho, loss, 0);
    Eigen::MatrixXd out = apply_kraus_raw(mid, amp, 0);
    const double leak = std::max(0.0, tr_in - out.trace());
    if (leak <= opt.tail_tolerance) {
      FockDensityMatrix res = rho;
      res.matrix = out / out.trace();
      res.tail_mass = 1.0 - (1.0 - rho.tail_mass) * (1.0 - leak);
      return res;
    }
    const int cap = rho.n_modes == 1 ? opt.max_cutoff : std::min(opt.max_cutoff, kMaxTwoModeCutoff);
    if (rho.cutoff >= cap) {
      throw ConvergenceError("channel output leaks mass " + std::to_string(leak) + " beyond cutoff " +
                             std::to_string(rho.cutoff) + " (max_cutoff reached)");
    }
    rho = rho.padded(std::min(cap, rho.cutoff + std::max(8, rho.cutoff / 2)));
  }
}

namespace detail {

/// Connected components of the joint sparsity pattern.
inline std::vector<std::vector<int>> support_components(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (int j = 0; j < n; ++j) {
    for (int i = j + 1; i < n; ++i) {
      if (a(i, j) != 0.0 || b(i, j) != 0.0) {
        const int ri = find(i), rj = find(j);
        if (ri != rj) parent[ri] = rj;
      }
    }
  }
  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto &g : groups) {
    if (!g.empty()) out.push_back(std::move(g));
  }
  return out;
}

inline Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd &m, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() < -tol) {
    throw DomainError("density matrix is not positive semidefinite (eigenvalue " + std::to_string(ev.minCoeff()) + ")");
  }
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace detail

/// Uhlmann fidelity Tr sqrt(sqrt(rho0) rho1 sqrt(rho0)).
inline double fidelity(const FockDensityMatrix &r0, const FockDensityMatrix &r1) {
  if (r0.n_modes != r1.n_modes) throw DomainError("fidelity needs states with the same number of modes");
  const int d = std::max(r0.cutoff, r1.cutoff);
  const FockDensityMatrix a = r0.padded(d), b = r1.padded(d);
  const double tol = 1e-10;
  double f = 0.0;
  for (const auto &comp : detail::support_components(a.matrix, b.matrix)) {
    const int k = static_cast<int>(comp.size());
    if (k == 1) {
      const double x = a.matrix(comp[0], comp[0]), y = b.matrix(comp[0], comp[0]);
      if (x < -tol || y < -tol) throw DomainError("density matrix has a negative diagonal entry");
      f += std::sqrt(std::max(0.0, x) * std::max(0.0, y));
      continue;
    }
    Eigen::MatrixXd sa(k, k), sb(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        sa(i, j) = a.matrix(comp[i], comp[j]);
        sb(i, j) = b.matrix(comp[i], comp[j]);
      }
    }
    const Eigen::MatrixXd ra = detail::psd_sqrt(sa, tol);
    (void)detail::psd_sqrt(sb, tol);
    const Eigen::MatrixXd m = ra * sb * ra;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    f += es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  }
  return std::min(f, 1.0 + 1e-12);
}

enum class FockQfiMethod { Sld, Bures };

namespace detail {

/// 2 sum_ij |<i|d|j>|^2 / (l_i + l_j) over the eigenbasis of rho, block by block.
inline double sld_qfi(const Eigen::MatrixXd &rho, const Eigen::MatrixXd &d) {
  const double thr = 1e-14;
  double j = 0.0;
  for (const auto &comp : support_components(rho, d)) {
    const int k = static_cast<int>(comp.size());
    Eigen::MatrixXd rc(k, k), dc(k, k);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        rc(a, b) = rho(comp[a], comp[b]);
        dc(a, b) = d(comp[a], comp[b]);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rc);
    const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXd dt = es.eigenvectors().transpose() * dc * es.eigenvectors();
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        const double s = lam(a) + lam(b);
        if (s > thr) j += 2.0 * dt(a, b) * dt(a, b) / s;
      }
    }
  }
  return j;
}

inline FockDensityMatrix at_cutoff(const FockDensityMatrix &r, int d) {
  if (r.cutoff > d) throw DomainError("family members must not exceed the common cutoff");
  return r.padded(d);
}

}  // namespace detail

/// Finite-difference QFI of a one-parameter Fock family, with one Richardson step.
/// Sld: eigenbasis formula with a central-difference derivative of rho.
/// Bures: 8(1 - F)/eps^2 from fidelities at +-eps and +-eps/2.
/// eps <= 0 selects the default 1e-2 * n_b.
inline FisherResult qfi_finite_diff(const std::function<FockDensityMatrix(double)> &family, double n_b,
                                    double eps = 0.0, FockQfiMethod method = FockQfiMethod::Sld) {
  if (!(n_b > 0.0)) throw DomainError("finite-difference QFI needs n_b > 0");
  const double h = eps > 0.0 ? eps : 1e-2 * n_b;
  const FockDensityMatrix r0 = family(n_b);
  const FockDensityMatrix rp = family(n_b + h), rm = family(n_b - h);
  const FockDensityMatrix rp2 = family(n_b + 0.5 * h), rm2 = family(n_b - 0.5 * h);
  FisherResult out;
  out.method = FisherMethod::FockFiniteDifference;
  double j1 = 0.0, j2 = 0.0;
  if (method == FockQfiMethod::Bures) {
    const double fp = fidelity(r0, rp), fm = fidelity(r0, rm);
    const double fp2 = fidelity(r0, rp2), fm2 = fidelity(r0, rm2);
    j1 = 4.0 * (2.0 - fp - fm) / (h * h);
    j2 = 4.0 * (2.0 - fp2 - fm2) / (0.25 * h * h);
    if (1.0 - fp2 < 1e-11 || 1.0 - fm2 < 1e-11) {
      out.flagged = true;
      out.note = "step below the fidelity noise floor";
    }
  } else {
    const int d = std::max({r0.cutoff, rp.cutoff, rm.cutoff, rp2.cutoff, rm2.cutoff});
    const Eigen::MatrixXd base = detail::at_cutoff(r0, d).matrix;
    const Eigen::MatrixXd d1 = (detail::at_cutoff(rp, d).matrix - detail::at_cutoff(rm, d).matrix) / (2.0 * h);
    const Eigen::MatrixXd d2 = (detail::at_cutoff(rp2, d).matrix - detail::at_cutoff(rm2, d).matrix) / h;
    j1 = detail::sld_qfi(base, d1);
    j2 = detail::sld_qfi(base, d2);
  }
  out.value = (4.0 * j2 - j1) / 3.0;
  out.error_estimate = std::abs(out.value - j2);
  out.params = {{"n_b", n_b}, {"eps", h}, {"cutoff", static_cast<double>(r0.cutoff)}, {"tail_mass", r0.tail_mass}};
  return out;
}

/// Family n_B -> (source through channel(kappa, n_B)) at a fixed cutoff.
inline std::function<FockDensityMatrix(double)> fock_channel_family(const SourceSpec &spec, double kappa, int cutoff,
                                                                    const FockOptions &opt = {}) {
  const FockDensityMatrix src = fock_from_source(spec, cutoff, opt.tail_tolerance);
  return [src, kappa, opt](double n_b) { return apply_channel_fock(src, ChannelParams{kappa, n_b}, opt); };
}

// ---------------------------------------------------------------------------
// Squeezers in the number basis.

namespace detail {

/// Padding that keeps truncation of exp(rK) below ~1e-16 on the kept levels.
inline int squeeze_pad(double r, int per_step) {
  const double t = std::tanh(std::abs(r));
  if (t < 1e-12) return 8;
  const int steps = static_cast<int>(std::ceil(std::log(1e-17) / std::log(t * t)));
  return std::max(40, per_step * steps + 20);
}

}  // namespace detail

/// exp(r (a^dag^2 - a^2)/2) restricted to the first `cutoff` levels.
inline Eigen::MatrixXd squeeze_operator_fock(double r, int cutoff) {
  const int p = cutoff + detail::squeeze_pad(r, 2);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(cutoff, cutoff);
  for (int parity = 0; parity < 2; ++parity) {
    std::vector<int> lv;
    for (int n = parity; n < p; n += 2) lv.push_back(n);
    const int k = static_cast<int>(lv.size());
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i + 1 < k; ++i) {
      const double n = lv[i];
      const double c = 0.5 * std::sqrt((n + 1.0) * (n + 2.0));
      gen(i + 1, i) = r * c;
      gen(i, i + 1) = -r * c;
    }
    const Eigen::MatrixXd e = gen.exp();
    for (int i = 0; i < k && lv[i] < cutoff; ++i) {
      for (int j = 0; j < k && lv[j] < cutoff; ++j) u(lv[i], lv[j]) = e(i, j);
    }
  }
  return u;
}

/// exp(r (a^dag b^dag - a b)) restricted to levels below `cutoff` in each mode.
inline Eigen::SparseMatrix<double> two_mode_squeeze_operator_fock(double r, int cutoff) {
  const int p = cutoff + detail::squeeze_pad(r, 1);
  std::vector<Eigen::Triplet<double>> trip;
  for (int delta = -(cutoff - 1); delta <= cutoff - 1; ++delta) {
    // Basis |m + delta, m>, m >= max(0, -delta).
    const int m0 = std::max(0, -delta);
    const int k = p - std::abs(delta);
    if (k <= 0) continue;
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i + 1 < k; ++i) {
      const double n = m0 + i + delta, m = m0 + i;
      const double c = std::sqrt((n + 1.0) * (m + 1.0));
      gen(i + 1, i) = r * c;
      gen(i, i + 1) = -r * c;
    }
    const Eigen::MatrixXd e = gen.exp();
    for (int i = 0; i < k; ++i) {
      const int ni = m0 + i + delta, mi = m0 + i;
      if (ni >= cutoff || mi >= cutoff) break;
      for (int j = 0; j < k; ++j) {
        const int nj = m0 + j + delta, mj = m0 + j;
        if (nj >= cutoff || mj >= cutoff) break;
        if (e(i, j) != 0.0) trip.emplace_back(ni * cutoff + mi, nj * cutoff + mj, e(i, j));
      }
    }
  }
  Eigen::SparseMatrix<double> s(cutoff * cutoff, cutoff * cutoff);
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

/// Diagonal of U rho U^T.
inline Eigen::VectorXd transformed_diagonal(const Eigen::SparseMatrix<double> &u, const Eigen::MatrixXd &rho) {
  const Eigen::MatrixXd t = u * rho;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(rho.rows());
  for (int k = 0; k < u.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(u, k); it; ++it) {
      p(it.row()) += t(it.row(), it.col()) * it.value();
    }
  }
  return p;
}

/// Photon statistics after anti-squeezing the SV channel output (oracle pipeline).
inline Eigen::VectorXd fock_nulled_sv_distribution(double gain, double kappa, double n_b, int cutoff,
                                                   const FockOptions &opt = {}) {
  const SourceSpec spec{SourceKind::SqueezedVacuum, gain, 0.0};
  const FockDensityMatrix out = apply_channel_fock(fock_from_source(spec, cutoff, opt.tail_tolerance),
                                                   ChannelParams{kappa, n_b}, opt);
  const Eigen::MatrixXd u = squeeze_operator_fock(-spec.squeeze_r(), out.cutoff);
  return (u * out.matrix * u.transpose()).diagonal();
}

/// Joint photon statistics after two-mode anti-squeezing of the TMSV channel output.
/// Entry n_signal * cutoff + n_idler of the returned vector.
inline Eigen::VectorXd fock_nulled_tmsv_distribution(double gain, double kappa, double n_b, int cutoff,
                                                     const FockOptions &opt = {}) {
  const SourceSpec spec{SourceKind::Tmsv, gain, 0.0};
  FockOptions o = opt;
  o.max_cutoff = cutoff;
  const FockDensityMatrix out = apply_channel_fock(fock_from_source(spec, cutoff, opt.tail_tolerance),
                                                   ChannelParams{kappa, n_b}, o);
  const double ns = spec.pure_photons();
  const double r2 = std::asinh(std::sqrt(kappa * ns / ((1.0 - kappa) * ns + 1.0)));
  return transformed_diagonal(two_mode_squeeze_operator_fock(-r2, cutoff), out.matrix);
}

}  // namespace qnoise

#endif
