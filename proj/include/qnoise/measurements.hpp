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

#ifndef QNOISE_MEASUREMENTS_HPP
#define QNOISE_MEASUREMENTS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "qnoise/errors.hpp"
#include "qnoise/fock_oracle.hpp"
#include "qnoise/gaussian_core.hpp"
#include "qnoise/qfi_closed_form.hpp"
#include "qnoise/special_functions.hpp"

namespace qnoise {

/// Photon-count distribution on n = 0..rows-1 (one mode) or (n_R, n_A) on rows x cols (two modes).
struct CountDistribution {
  int n_modes = 1;
  int rows = 0;
  int cols = 1;
  std::vector<double> probs;
  double tail_mass = 0.0;

  static CountDistribution single(std::vector<double> p) {
    CountDistribution d;
    d.rows = static_cast<int>(p.size());
    d.probs = std::move(p);
    d.finalize();
    return d;
  }

  static CountDistribution joint(int rows, int cols, std::vector<double> p) {
    if (static_cast<size_t>(rows) * cols != p.size()) throw DomainError("joint distribution shape mismatch");
    CountDistribution d;
    d.n_modes = 2;
    d.rows = rows;
    d.cols = cols;
    d.probs = std::move(p);
    d.finalize();
    return d;
  }

  size_t size() const { return probs.size(); }
  double prob(int n) const { return probs.at(static_cast<size_t>(n)); }
  double prob(int n_r, int n_a) const { return probs.at(static_cast<size_t>(n_r) * cols + n_a); }
  double total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

  /// Shell index used for truncation: n, or n_R + n_A.
  int shell(size_t i) const { return n_modes == 1 ? static_cast<int>(i) : static_cast<int>(i / cols + i % cols); }
  int n_shells() const { return n_modes == 1 ? rows : rows + cols - 1; }

  double mean(int mode = 0) const {
    double m = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
      const int n = n_modes == 1 ? static_cast<int>(i) : (mode == 0 ? static_cast<int>(i / cols) : static_cast<int>(i % cols));
      m += n * probs[i];
    }
    return m;
  }

  /// Clamps rounding negatives and sets tail_mass = 1 - sum.
  void finalize() {
    for (double &p : probs) {
      if (p < 0.0) {
        if (p < -1e-12) throw ConvergenceError("negative probability " + std::to_string(p));
        p = 0.0;
      }
    }
    const double s = total();
    if (s > 1.0 + 1e-9) throw ConvergenceError("distribution sums to " + std::to_string(s) + " > 1");
    tail_mass = std::max(0.0, 1.0 - s);
  }
};

// ---------------------------------------------------------------------------
// Gaussian receivers.

inline FisherResult fi_homodyne_vacuum(double n_b, double n_t = 0.0, double kappa = 1.0) {
  detail::require(n_b >= 0.0 && n_t >= 0.0 && kappa >= 0.0, "homodyne needs n_b, n_t, kappa >= 0");
  const double d = 1.0 + 2.0 * kappa * n_t + 2.0 * n_b;
  return detail::closed(2.0 / (d * d), {{"n_b", n_b}, {"n_t", n_t}, {"kappa", kappa}});
}

inline FisherResult fi_homodyne_sv(double gain, double kappa, double n_b, double n_t = 0.0) {
  detail::require(gain >= 1.0 && n_b >= 0.0 && n_t >= 0.0 && kappa >= 0.0, "invalid homodyne parameters");
  const double d = -(gain - 1.0) * kappa + gain * (2.0 * n_b + 1.0) + 2.0 * kappa * n_t;
  if (!(d > 0.0)) throw DomainError("homodyne variance is nonpositive");
  return detail::closed(2.0 * gain * gain / (d * d), {{"G", gain}, {"kappa", kappa}, {"n_b", n_b}, {"n_t", n_t}});
}

inline FisherResult fi_bell(double gain, double kappa, double n_b, double n_t = 0.0) {
  detail::require(gain >= 1.0 && n_b >= 0.0 && n_t >= 0.0 && kappa >= 0.0, "invalid Bell parameters");
  const auto mn = ChannelOutputParams::from(ChannelParams{kappa, n_b}, n_t);
  const double sk = std::sqrt(kappa);
  const double d = gain * mn.mu + gain * gain * (sk - 1.0) * (sk - 1.0) * mn.nu + (sk + 1.0) * (sk + 1.0) * mn.nu;
  if (!(d > 0.0)) throw DomainError("Bell variance is nonpositive");
  return detail::closed(16.0 * gain * gain / (d * d), {{"G", gain}, {"kappa", kappa}, {"n_b", n_b}, {"n_t", n_t}});
}

/// Geometric count statistics of a thermal output with occupation kappa n_t + n_b.
inline FisherResult fi_photon_counting_vacuum(double n_b, double n_t = 0.0, double kappa = 1.0) {
  detail::require(n_b >= 0.0 && n_t >= 0.0 && kappa >= 0.0, "photon counting needs n_b, n_t, kappa >= 0");
  const double n = kappa * n_t + n_b;
  if (!(n > 0.0)) throw DomainError("photon-counting Fisher information diverges at zero occupation");
  return detail::closed(1.0 / (n * (n + 1.0)), {{"n_b", n_b}, {"n_t", n_t}, {"kappa", kappa}});
}

inline CountDistribution geometric_distribution(double n_mean, int n_max) {
  detail::require(n_mean >= 0.0 && n_max >= 0, "geometric distribution needs n >= 0");
  std::vector<double> p(static_cast<size_t>(n_max) + 1);
  const double lq = n_mean > 0.0 ? std::log(n_mean / (1.0 + n_mean)) : -std::numeric_limits<double>::infinity();
  for (int n = 0; n <= n_max; ++n) p[n] = n == 0 ? 1.0 / (1.0 + n_mean) : std::exp(n * lq - std::log1p(n_mean));
  return CountDistribution::single(std::move(p));
}

// ---------------------------------------------------------------------------
// Nulling receivers.

/// Single-mode nulled state through A = <a^dag a> and B = |<a^2>|.
struct NulledSvParams {
  double A = 0.0;
  double B = 0.0;

  /// Ideal source (n_t = 0) after anti-squeezing by the source's own squeeze parameter.
  static NulledSvParams from_channel(double gain, double kappa, double n_b) {
    detail::require(gain >= 1.0, "gain must be >= 1");
    if (kappa > 1.0) throw DomainError("nulling receiver requires kappa <= 1");
    ChannelParams{kappa, n_b}.validate();
    const auto mn = ChannelOutputParams::from(ChannelParams{kappa, n_b}, 0.0);
    return {(0.5 * mn.mu * (gain + 1.0 / gain) + 2.0 * kappa * mn.nu - 2.0) / 4.0,
            std::abs(0.5 * mn.mu * (1.0 / gain - gain) / 4.0)};
  }

  /// Any zero-mean single-mode Gaussian state.
  static NulledSvParams from_state(const GaussianState &st) {
    if (st.n_modes() != 1) throw DomainError("single-mode state expected");
    const auto v = st.mode_block(0);
    return {0.5 * (v(0, 0) + v(1, 1) - 1.0), std::hypot(0.5 * (v(0, 0) - v(1, 1)), v(0, 1))};
  }

  double E() const { return A * (A + 2.0) - B * B + 1.0; }

  // A >= |B| fails for genuine channel outputs (e.g. kappa = 0.6); physicality is E > 0 and A >= 0.
  void validate() const {
    if (!(A >= -1e-12) || !(E() > 0.0) || !std::isfinite(A) || !std::isfinite(B)) {
      throw DomainError("nulled single-mode parameters are unphysical (A=" + std::to_string(A) +
                        ", B=" + std::to_string(B) + ")");
    }
  }
};

inline CountDistribution nulled_sv_distribution(const NulledSvParams &prm, int n_max = 200) {
  prm.validate();
  detail::require(n_max >= 0, "n_max must be >= 0");
  const double e = prm.E(), a = std::max(0.0, prm.A), b = prm.B;
  const double u = (a * a + a - b * b) / e, d = (a * a - b * b) / e;
  const auto s = scaled_legendre_sequence(u, d, n_max);
  std::vector<double> p(s.size());
  const double norm = 1.0 / std::sqrt(e);
  for (size_t n = 0; n < s.size(); ++n) p[n] = s[n] * norm;
  return CountDistribution::single(std::move(p));
}

inline CountDistribution nulled_sv_distribution(double gain, double kappa, double n_b, int n_max = 200) {
  return nulled_sv_distribution(NulledSvParams::from_channel(gain, kappa, n_b), n_max);
}

/// Two-mode nulled state [[e I, c Z], [c Z, s I]] in unit-vacuum quadratures.
struct NulledTmsvParams {
  double e = 1.0;
  double s = 1.0;
  double c = 0.0;
  double x = 0.0;
  double y = 0.0;

  static NulledTmsvParams from_ecs(double e, double s, double c) {
    return {e, s, c, c * c - (e + 1.0) * s + e + 1.0, c * c - (e - 1.0) * (s + 1.0)};
  }

  /// Ideal source with photon number n_s after two-mode anti-squeezing.
  static NulledTmsvParams from_channel(double n_s, double kappa, double n_b) {
    detail::require(n_s >= 0.0, "n_s must be >= 0");
    if (kappa > 1.0) throw DomainError("nulling receiver requires kappa <= 1");
    ChannelParams{kappa, n_b}.validate();
    const double cp = std::sqrt(n_s * (n_s + 1.0)), den = (1.0 - kappa) * n_s + 1.0;
    const double e = ((1.0 - kappa) * n_s + 2.0 * n_b * (n_s + 1.0) + 1.0) / den;
    const double s = (-2.0 * (kappa - 1.0) * (kappa - 1.0) * n_s * n_s + (kappa * (3.0 - 2.0 * n_b) - 3.0) * n_s - 1.0) /
                     ((kappa - 1.0) * n_s - 1.0);
    const double c = -2.0 * n_b * std::sqrt(kappa) * cp / den;
    return from_ecs(e, s, c);
  }

  /// Two-mode state of the phase-insensitive form (checked).
  static NulledTmsvParams from_state(const GaussianState &st, double tol = 1e-10) {
    if (st.n_modes() != 2) throw DomainError("two-mode state expected");
    const Eigen::MatrixXd &v = st.cov();
    const double e = v(0, 0) + v(1, 1), s = v(2, 2) + v(3, 3), c = v(0, 2) - v(1, 3);
    Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(4, 4);
    ref.diagonal() << e / 2, e / 2, s / 2, s / 2;
    ref(0, 2) = ref(2, 0) = c / 2;
    ref(1, 3) = ref(3, 1) = -c / 2;
    if ((v - ref).cwiseAbs().maxCoeff() > tol * std::max(1.0, v.cwiseAbs().maxCoeff())) {
      throw DomainError("two-mode state is not of the [[e I, c Z], [c Z, s I]] form");
    }
    return from_ecs(e, s, c);
  }

  // Number-basis moments: a = <n_R>, b = <n_A>, k = |<a_R a_A>|.
  double a() const { return 0.5 * (e - 1.0); }
  double b() const { return 0.5 * (s - 1.0); }
  double k() const { return 0.5 * std::abs(c); }
  double z() const { return 4.0 * c * c / (x * y); }

  void validate() const {
    const double xp = -x / 4.0, yp = -y / 4.0;
    if (!(a() >= -1e-12 && b() >= -1e-12 && xp >= -1e-12 && yp >= -1e-12)) {
      throw DomainError("nulled two-mode parameters are unphysical (e=" + std::to_string(e) + ", s=" +
                        std::to_string(s) + ", c=" + std::to_string(c) + ")");
    }
  }
};

/// Joint counts by the terminating sum
/// P = (1+a+b+D)^-(N+1) sum_j C(n_A,j) C(n_R,j) X^(n_A-j) Y^(n_R-j) k^2j,
/// X = b(a+1) - k^2, Y = a(b+1) - k^2, D = ab - k^2, N = n_R + n_A.
/// Equal to the 2F1 form wherever that converges, and finite at z = 1.
inline CountDistribution nulled_tmsv_distribution(const NulledTmsvParams &prm, int n_max = 120) {
  prm.validate();
  detail::require(n_max >= 0, "n_max must be >= 0");
  const double a = std::max(0.0, prm.a()), b = std::max(0.0, prm.b()), k = prm.k();
  const double xp = std::max(0.0, b * (a + 1.0) - k * k), yp = std::max(0.0, a * (b + 1.0) - k * k);
  const double lnorm = std::log1p(a + b + a * b - k * k);
  const double ninf = -std::numeric_limits<double>::infinity();
  const double lx = xp > 0.0 ? std::log(xp) : ninf, ly = yp > 0.0 ? std::log(yp) : ninf;
  const double lk2 = k > 0.0 ? 2.0 * std::log(k) : ninf;
  const int d = n_max + 1;
  std::vector<double> p(static_cast<size_t>(d) * d, 0.0);
  for (int nr = 0; nr < d; ++nr) {
    for (int na = 0; na < d; ++na) {
      double ls = ninf;
      for (int j = 0; j <= std::min(nr, na); ++j) {
        const double t1 = na - j > 0 ? (na - j) * lx : 0.0;
        const double t2 = nr - j > 0 ? (nr - j) * ly : 0.0;
        const double t3 = j > 0 ? j * lk2 : 0.0;
        ls = log_add(ls, log_binomial(na, j) + log_binomial(nr, j) + t1 + t2 + t3);
      }
      p[static_cast<size_t>(nr) * d + na] = std::exp(ls - (nr + na + 1.0) * lnorm);
    }
  }
  return CountDistribution::joint(d, d, std::move(p));
}

inline CountDistribution nulled_tmsv_distribution(double n_s, double kappa, double n_b, int n_max = 120) {
  return nulled_tmsv_distribution(NulledTmsvParams::from_channel(n_s, kappa, n_b), n_max);
}

/// Same distribution by the regularized 2F1 series in the log domain; needs z < 1.
inline CountDistribution nulled_tmsv_distribution_series(const NulledTmsvParams &prm, int n_max = 120) {
  prm.validate();
  const double xp = -prm.x / 4.0, yp = -prm.y / 4.0;
  const double delta = prm.a() * prm.b() - prm.k() * prm.k();
  const double z = prm.k() * prm.k() / (xp * yp);
  if (!(xp > 0.0 && yp > 0.0 && delta > 0.0)) throw DomainError("2F1 form needs x, y, ab - k^2 strictly inside the domain");
  if (!(std::abs(z) < 1.0)) throw DomainError("2F1 convergence ratio |z| >= 1 (z=" + std::to_string(z) + ")");
  const int d = n_max + 1;
  std::vector<double> p(static_cast<size_t>(d) * d, 0.0);
  for (int nr = 0; nr < d; ++nr) {
    for (int na = 0; na < d; ++na) {
      const double lf = log_hyp2f1_series(na + 1.0, nr + 1.0, 1.0, z).value;
      const double lp = (nr + na + 1.0) * std::log(delta) - (na + 1.0) * std::log(yp) - (nr + 1.0) * std::log(xp) + lf;
      p[static_cast<size_t>(nr) * d + na] = std::exp(lp);
    }
  }
  return CountDistribution::joint(d, d, std::move(p));
}

/// Two-mode anti-squeezing parameter that nulls the signal over pure loss.
inline double tmsv_null_squeeze(double r, double kappa) { return std::atanh(std::sqrt(kappa) * std::tanh(r)); }

/// n_B -> nulled SV counts via the Gaussian pipeline; accepts noisy sources (n_t > 0).
inline std::function<CountDistribution(double)> nulled_sv_family(const SourceSpec &src, double kappa, int n_max = 200) {
  if (kappa > 1.0) throw DomainError("nulling receiver requires kappa <= 1");
  if (src.kind != SourceKind::SqueezedVacuum) throw DomainError("SV nulling needs a squeezed-vacuum source");
  return [src, kappa, n_max](double n_b) {
    const GaussianState out = apply_channel(make_source(src), ChannelParams{kappa, n_b}, 0);
    const GaussianState nulled = symplectic_transform(out, SymplecticTransform::single_mode_squeeze(-src.squeeze_r()), {0});
    return nulled_sv_distribution(NulledSvParams::from_state(nulled), n_max);
  };
}

inline std::function<CountDistribution(double)> nulled_tmsv_family(const SourceSpec &src, double kappa, int n_max = 120) {
  if (kappa > 1.0) throw DomainError("nulling receiver requires kappa <= 1");
  if (src.kind != SourceKind::Tmsv) throw DomainError("TMSV nulling needs a TMSV source");
  const double r2 = tmsv_null_squeeze(src.squeeze_r(), kappa);
  return [src, kappa, n_max, r2](double n_b) {
    const GaussianState out = apply_channel(make_source(src), ChannelParams{kappa, n_b}, 0);
    const GaussianState nulled = symplectic_transform(out, SymplecticTransform::two_mode_squeeze(-r2), {0, 1});
    return nulled_tmsv_distribution(NulledTmsvParams::from_state(nulled), n_max);
  };
}

// ---------------------------------------------------------------------------
// Fisher information of a count distribution.

struct DistributionFiOptions {
  double cumulative_target = 1e-12;
  double last_decade_tol = 1e-9;
  int decade = 10;
};

inline FisherResult fi_from_distribution(const std::function<CountDistribution(double)> &family, double n_b,
                                         const DistributionFiOptions &opt = {}) {
  if (!(n_b > 0.0)) throw DomainError("distribution Fisher information needs n_b > 0");
  const double h = std::max(1e-3 * n_b, 1e-8);
  const CountDistribution p0 = family(n_b), pp = family(n_b + h), pm = family(n_b - h);
  if (pp.size() != p0.size() || pm.size() != p0.size()) throw DomainError("family changed support size");
  std::vector<double> shell_fi(p0.n_shells(), 0.0), shell_p(p0.n_shells(), 0.0);
  for (size_t i = 0; i < p0.size(); ++i) {
    const int sh = p0.shell(i);
    shell_p[sh] += p0.probs[i];
    if (p0.probs[i] <= 0.0) continue;
    const double dp = (pp.probs[i] - pm.probs[i]) / (2.0 * h);
    shell_fi[sh] += dp * dp / p0.probs[i];
  }
  FisherResult out;
  out.method = FisherMethod::DistributionSum;
  double cum = 0.0, fi = 0.0;
  int used = p0.n_shells();
  bool converged = false;
  for (int sh = 0; sh < p0.n_shells(); ++sh) {
    cum += shell_p[sh];
    fi += shell_fi[sh];
    if (sh + 1 >= opt.decade && cum > 1.0 - opt.cumulative_target) {
      double last = 0.0;
      for (int t = sh + 1 - opt.decade; t <= sh; ++t) last += shell_fi[t];
      if (last < opt.last_decade_tol * fi) {
        used = sh + 1;
        converged = true;
        break;
      }
    }
  }
  out.value = fi;
  out.params = {{"n_b", n_b}, {"step", h}, {"shells", static_cast<double>(used)}, {"tail_mass", p0.tail_mass}};
  if (!converged) {
    out.flagged = true;
    out.note = "truncation criteria not met within the supplied support";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Direct joint photon counting on the TMSV output (no nulling).

/// P(n_R, n_A) = p(n_A) T(n_R | n_A), T from the Fock-oracle loss and amplifier Kraus weights.
inline CountDistribution direct_pd_tmsv_distribution(double n_s, double kappa, double n_b, int n_max = 120) {
  const ChannelParams ch{kappa, n_b};
  ch.validate();
  detail::require(n_s >= 0.0, "n_s must be >= 0");
  const int d = n_max + 1;
  const auto [loss, amp] = kraus_channel(ch, d);
  Eigen::MatrixXd tl = Eigen::MatrixXd::Zero(d, d), ta = Eigen::MatrixXd::Zero(d, d);
  for (const auto &op : loss.operators) {
    for (int n = 0; n < d; ++n) {
      const int m = n + op.shift;
      if (m >= 0 && m < d) tl(m, n) += op.coeffs[n] * op.coeffs[n];
    }
  }
  for (const auto &op : amp.operators) {
    for (int n = 0; n < d; ++n) {
      const int m = n + op.shift;
      if (m >= 0 && m < d) ta(m, n) += op.coeffs[n] * op.coeffs[n];
    }
  }
  const Eigen::MatrixXd t = ta * tl;
  std::vector<double> p(static_cast<size_t>(d) * d, 0.0);
  const double q = n_s / (1.0 + n_s);
  for (int na = 0; na < d; ++na) {
    const double pa = std::pow(q, na) / (1.0 + n_s);
    for (int nr = 0; nr < d; ++nr) p[static_cast<size_t>(nr) * d + na] = pa * t(nr, na);
  }
  return CountDistribution::joint(d, d, std::move(p));
}

inline FisherResult fi_direct_pd_tmsv(double n_s, double kappa, double n_b, int n_max = 120) {
  return fi_from_distribution([=](double nb) { return direct_pd_tmsv_distribution(n_s, kappa, nb, n_max); }, n_b);
}

// ---------------------------------------------------------------------------
// Monte Carlo.

/// Index value for draws that land in the tail mass.
inline constexpr std::int64_t kOverflowSample = -1;

/// Inverse-CDF draws of flat indices (n, or n_R * cols + n_A).
inline std::vector<std::int64_t> sample_counts(const CountDistribution &dist, std::size_t n_samples, std::uint64_t seed) {
  std::vector<double> cdf(dist.size());
  double acc = 0.0;
  for (size_t i = 0; i < dist.size(); ++i) {
    acc += dist.probs[i];
    cdf[i] = acc;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> out(n_samples);
  for (auto &v : out) {
    // 53-bit uniform in [0, 1), independent of the standard library's distribution code.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    v = it == cdf.end() ? kOverflowSample : static_cast<std::int64_t>(it - cdf.begin());
  }
  return out;
}

struct MleResult {
  double estimate = 0.0;
  double log_likelihood = 0.0;
  double curvature = 0.0;  // -d^2 logL / dn_B^2 at the estimate
  bool at_boundary = false;
  int evaluations = 0;
};

inline double log_likelihood(const std::vector<std::int64_t> &samples, const CountDistribution &dist) {
  double ll = 0.0;
  for (const auto s : samples) {
    const double p = s == kOverflowSample ? dist.tail_mass : (s >= 0 && static_cast<size_t>(s) < dist.size() ? dist.probs[s] : 0.0);
    if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
    ll += std::log(p);
  }
  return ll;
}

/// Golden-section maximization of the likelihood over [lo, hi], in log(n_B) when lo > 0.
inline MleResult mle_estimate(const std::vector<std::int64_t> &samples,
                              const std::function<CountDistribution(double)> &model, double lo, double hi,
                              double tol = 1e-9) {
  if (!(lo >= 0.0 && hi > lo)) throw DomainError("MLE bracket must satisfy 0 <= lo < hi");
  if (samples.empty()) throw DomainError("MLE needs at least one sample");
  // Histogram first so each likelihood evaluation is O(support).
  std::vector<std::int64_t> keys(samples);
  std::sort(keys.begin(), keys.end());
  std::vector<std::pair<std::int64_t, double>> hist;
  for (size_t i = 0; i < keys.size();) {
    size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    hist.emplace_back(keys[i], static_cast<double>(j - i));
    i = j;
  }
  MleResult res;
  auto ll = [&](double nb) {
    ++res.evaluations;
    const CountDistribution d = model(nb);
    double s = 0.0;
    for (const auto &[k, c] : hist) {
      const double p = k == kOverflowSample ? d.tail_mass : (static_cast<size_t>(k) < d.size() ? d.probs[k] : 0.0);
      if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
      s += c * std::log(p);
    }
    return s;
  };
  const bool logscale = lo > 0.0;
  auto to_x = [&](double t) { return logscale ? std::exp(t) : t; };
  double a = logscale ? std::log(lo) : lo, b = logscale ? std::log(hi) : hi;
  const double a0 = a, b0 = b;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = ll(to_x(c)), fd = ll(to_x(d));
  while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = ll(to_x(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = ll(to_x(d));
    }
  }
  const double t = 0.5 * (a + b);
  res.estimate = to_x(t);
  res.log_likelihood = ll(res.estimate);
  const double edge = 1e3 * tol * std::max(1.0, std::abs(a0) + std::abs(b0));
  res.at_boundary = (t - a0) < edge || (b0 - t) < edge;
  const double h = 1e-3 * std::max(res.estimate, 1e-12);
  if (res.estimate - h > 0.0) {
    res.curvature = -(ll(res.estimate + h) - 2.0 * res.log_likelihood + ll(res.estimate - h)) / (h * h);
  } else {
    res.curvature = std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

}  // namespace qnoise

#endif
