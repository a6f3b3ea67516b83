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

#ifndef QNOISE_HALOSCOPE_HPP
#define QNOISE_HALOSCOPE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qnoise/errors.hpp"
#include "qnoise/gaussian_core.hpp"
#include "qnoise/measurements.hpp"
#include "qnoise/qfi_closed_form.hpp"
#include "qnoise/quadrature.hpp"

namespace qnoise {

inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kBoltzmann = 1.380649e-23;
inline constexpr double kPi = 3.14159265358979323846;

/// Bose-Einstein occupation at angular frequency omega and temperature temp (kelvin).
inline double thermal_occupation(double omega, double temp) {
  detail::require(omega > 0.0 && temp > 0.0, "thermal occupation needs omega > 0 and T > 0");
  return 1.0 / std::expm1(kHbar * omega / (kBoltzmann * temp));
}

/// Cavity coupling rates (rad/s) and bath occupation.
struct CavityParams {
  double gamma_m = 1.0;
  double gamma_l = 1.0;
  double gamma_a = 1e-12;
  double temp = 0.061;
  double omega_c = 2.0 * kPi * 10e9;
  double n_t = 0.0;

  static CavityParams physical(double gm_ratio, double ga_ratio, double temp_k, double omega_c, double gamma_l = 1.0) {
    CavityParams c{gm_ratio * gamma_l, gamma_l, ga_ratio * gamma_l, temp_k, omega_c, thermal_occupation(omega_c, temp_k)};
    c.validate();
    return c;
  }

  /// Same with the bath occupation given directly; temp is back-computed at omega_c.
  static CavityParams with_occupation(double gm_ratio, double ga_ratio, double n_t, double gamma_l = 1.0,
                                      double omega_c = 2.0 * kPi * 10e9) {
    detail::require(n_t > 0.0, "n_t must be > 0");
    CavityParams c{gm_ratio * gamma_l, gamma_l, ga_ratio * gamma_l,
                   kHbar * omega_c / (kBoltzmann * std::log1p(1.0 / n_t)), omega_c, n_t};
    c.validate();
    return c;
  }

  CavityParams with_gm_ratio(double r) const {
    CavityParams c = *this;
    c.gamma_m = r * gamma_l;
    c.validate();
    return c;
  }

  double gamma_total() const { return gamma_m + gamma_l + gamma_a; }
  double gm_tilde() const { return gamma_m / gamma_l; }
  double ga_tilde() const { return gamma_a / gamma_l; }
  bool weak_axion_coupling() const { return gamma_a <= 1e-3 * gamma_l; }

  void validate() const {
    detail::require(gamma_m > 0.0 && gamma_l > 0.0 && gamma_a > 0.0, "coupling rates must be > 0");
    detail::require(std::isfinite(gamma_m) && std::isfinite(gamma_l) && std::isfinite(gamma_a), "non-finite rates");
    detail::require(n_t > 0.0 && std::isfinite(n_t), "bath occupation n_t must be > 0");
  }
};

/// chi_mm^2, chi_ma^2 and 1 - chi_mm^2 (computed directly to avoid cancellation far off resonance).
struct Susceptibilities {
  double chi_mm2 = 0.0;
  double chi_ma2 = 0.0;
  double one_minus_chi_mm2 = 1.0;
};

inline Susceptibilities susceptibilities(double omega, const CavityParams &c) {
  const double s = 0.25 * (c.gamma_m + c.gamma_l) * (c.gamma_m + c.gamma_l) + omega * omega;
  const double d = 0.25 * (c.gamma_m - c.gamma_l) * (c.gamma_m - c.gamma_l) + omega * omega;
  return {d / s, c.gamma_m * c.gamma_a / s, c.gamma_m * c.gamma_l / s};
}

enum class Receiver { QfiLimit, UpperBound, Homodyne, Bell, Nulling, PhotonCounting };
enum class Engineering { Ideal, Practical };

inline std::string to_string(Engineering e) { return e == Engineering::Ideal ? "ideal" : "practical"; }

struct StrategySpec {
  SourceKind source = SourceKind::Vacuum;
  double gain = 1.0;
  Receiver receiver = Receiver::QfiLimit;
  Engineering engineering = Engineering::Ideal;
  BoundBranch branch = BoundBranch::Combined;

  void validate() const {
    detail::require(gain >= 1.0 && std::isfinite(gain), "gain must be >= 1");
    detail::require(source != SourceKind::Vacuum || gain == 1.0 || receiver == Receiver::UpperBound,
                    "vacuum source takes gain 1");
    bool ok = true;
    switch (receiver) {
      case Receiver::QfiLimit:
      case Receiver::UpperBound: break;
      case Receiver::Homodyne: ok = source != SourceKind::Tmsv; break;
      case Receiver::Bell: ok = source == SourceKind::Tmsv; break;
      case Receiver::Nulling: ok = source != SourceKind::Vacuum; break;
      case Receiver::PhotonCounting: ok = source == SourceKind::Vacuum; break;
    }
    if (!ok) throw DomainError("receiver incompatible with source in strategy " + name());
  }

  /// Source photon number entering the bound: pure for ideal, contaminated for practical.
  double bound_photons(double n_t) const {
    const SourceSpec s{SourceKind::Tmsv, gain, engineering == Engineering::Ideal ? 0.0 : n_t};
    return engineering == Engineering::Ideal ? s.pure_photons() : s.signal_photons();
  }

  std::string name() const {
    switch (receiver) {
      case Receiver::UpperBound:
        return branch == BoundBranch::Combined ? "ub" : (branch == BoundBranch::UnitaryExtension ? "ub-ue" : "ub-tp");
      case Receiver::QfiLimit:
        return source == SourceKind::Vacuum ? "vl" : (source == SourceKind::SqueezedVacuum ? "sv-qfi" : "tmsv-qfi");
      case Receiver::Homodyne: return source == SourceKind::Vacuum ? "vac-hom" : "sv-hom";
      case Receiver::Bell: return "bell";
      case Receiver::Nulling: return source == SourceKind::SqueezedVacuum ? "sv-null" : "tmsv-null";
      case Receiver::PhotonCounting: return "vac-pc";
    }
    return "?";
  }
};

inline const std::vector<std::string> &strategy_names() {
  static const std::vector<std::string> names{"vl", "vac-pc", "vac-hom", "sv-qfi", "sv-hom", "sv-null",
                                              "tmsv-qfi", "bell", "tmsv-null", "ub", "ub-ue", "ub-tp"};
  return names;
}

inline StrategySpec parse_strategy(const std::string &name, double gain, Engineering eng) {
  StrategySpec s;
  s.engineering = eng;
  s.gain = gain;
  if (name == "vl") s = {SourceKind::Vacuum, 1.0, Receiver::QfiLimit, eng};
  else if (name == "vac-pc") s = {SourceKind::Vacuum, 1.0, Receiver::PhotonCounting, eng};
  else if (name == "vac-hom") s = {SourceKind::Vacuum, 1.0, Receiver::Homodyne, eng};
  else if (name == "sv-qfi") s = {SourceKind::SqueezedVacuum, gain, Receiver::QfiLimit, eng};
  else if (name == "sv-hom") s = {SourceKind::SqueezedVacuum, gain, Receiver::Homodyne, eng};
  else if (name == "sv-null") s = {SourceKind::SqueezedVacuum, gain, Receiver::Nulling, eng};
  else if (name == "tmsv-qfi") s = {SourceKind::Tmsv, gain, Receiver::QfiLimit, eng};
  else if (name == "bell") s = {SourceKind::Tmsv, gain, Receiver::Bell, eng};
  else if (name == "tmsv-null") s = {SourceKind::Tmsv, gain, Receiver::Nulling, eng};
  else if (name == "ub") s = {SourceKind::Tmsv, gain, Receiver::UpperBound, eng, BoundBranch::Combined};
  else if (name == "ub-ue") s = {SourceKind::Tmsv, gain, Receiver::UpperBound, eng, BoundBranch::UnitaryExtension};
  else if (name == "ub-tp") s = {SourceKind::Tmsv, gain, Receiver::UpperBound, eng, BoundBranch::Teleportation};
  else throw DomainError("unknown strategy '" + name + "'");
  s.validate();
  return s;
}

namespace detail {

/// Output covariance of `src` through N_{kappa, n_b} with the added noise written through l = 1 - kappa.
inline GaussianState channel_output_stable(const SourceSpec &src, double kappa, double l, double n_b) {
  const GaussianState in = make_source(src);
  Eigen::MatrixXd v = in.cov();
  const double sk = std::sqrt(kappa);
  v.block<2, 2>(0, 0) = kappa * v.block<2, 2>(0, 0) + (n_b + 0.5 * l) * Eigen::Matrix2d::Identity();
  if (v.rows() > 2) {
    v.block(0, 2, 2, v.cols() - 2) *= sk;
    v.block(2, 0, v.rows() - 2, 2) *= sk;
  }
  return GaussianState(v);
}

/// Single-mode QFI for V = diag(alpha, beta) with dV/dn_b = I; q = 4 alpha beta - 1 passed in precomputed.
inline double diagonal_mode_qfi(double alpha, double beta, double q) {
  const double d = alpha * beta;
  return 2.0 * (alpha * alpha + beta * beta) / (d * (q + 2.0)) +
         2.0 * (alpha + beta) * (alpha + beta) / (d * q * (q + 2.0));
}

/// Noisy squeezed vacuum through N_{kappa, n_b} with 1 - kappa = l; no general-formula conditioning loss.
inline double sv_qfi_stable(double gain, double n_t, double kappa, double l, double n_b) {
  const double h = n_t + 0.5, c = n_b + 0.5 * l;
  const double alpha = kappa * h / gain + c, beta = kappa * h * gain + c;
  // kappa (2 n_t + 1) - 1 = 2 kappa n_t - l
  const double q = (2.0 * kappa * n_t - l) * (kappa * (2.0 * n_t + 1.0) + 1.0) +
                   2.0 * kappa * (2.0 * n_t + 1.0) * c * (gain + 1.0 / gain) + 4.0 * c * c;
  return diagonal_mode_qfi(alpha, beta, q);
}

/// Noisy TMSV through N_{kappa, n_b} on the signal. Symplectic eigenvalues nu_k and the near-pure factors
/// nu_k - 1/2 are formed from sums of nonnegative terms.
inline double tmsv_qfi_stable(double gain, double n_t, double kappa, double l, double n_b) {
  const double r = 0.5 * std::log(gain), sh_r = std::sinh(r);
  const double ch = 1.0 + 2.0 * sh_r * sh_r, sh = std::sinh(2.0 * r);
  const double h = n_t + 0.5, cn = n_b + 0.5 * l;
  const double c = std::sqrt(kappa) * h * sh;
  const double d = cn - l * h * ch, s = (1.0 + kappa) * h * ch + cn;
  const double x1 = 4.0 * kappa * n_t * (n_t + 1.0) + 2.0 * n_b * (2.0 * h * ch + 1.0);
  const double x2 = 4.0 * kappa * n_t * (n_t + 1.0) + (2.0 * n_t * ch + 2.0 * sh_r * sh_r) * (2.0 * l + 2.0 * n_b);
  const double delta = std::sqrt(x2 + (d + 1.0) * (d + 1.0));
  const double nu1 = 0.5 * (delta + d), nu2 = 0.5 * (delta - d);
  const double nu1m = x1 / (2.0 * (delta + 1.0 - d)), nu2m = x2 / (2.0 * (delta + 1.0 + d));
  const double dnu1 = (s + delta) / (2.0 * delta), dnu2 = 2.0 * c * c / (delta * (s + delta));
  double j = dnu1 * dnu1 / (nu1m * (nu1 + 0.5)) + 2.0 * c * c / (delta * delta * (nu1 * nu2 + 0.25));
  if (dnu2 > 0.0) j += dnu2 * dnu2 / (nu2m * (nu2 + 0.5));
  return j;
}

/// Nulled-SV parameters for an ideal source at (kappa, 1 - kappa = l, n_b).
inline NulledSvParams nulled_sv_stable(double gain, double kappa, double l, double n_b) {
  const double mu = 4.0 * n_b + 2.0 * l;
  (void)kappa;
  return {(0.5 * mu * (gain + 1.0 / gain) - 2.0 * l) / 4.0, std::abs(0.5 * mu * (1.0 / gain - gain) / 4.0)};
}

inline NulledTmsvParams nulled_tmsv_stable(double n_s, double kappa, double l, double n_b) {
  const double cp = std::sqrt(n_s * (n_s + 1.0)), den = l * n_s + 1.0;
  const double e = (l * n_s + 2.0 * n_b * (n_s + 1.0) + 1.0) / den;
  const double s = (2.0 * l * l * n_s * n_s + (3.0 * l + 2.0 * kappa * n_b) * n_s + 1.0) / den;
  const double c = -2.0 * n_b * std::sqrt(kappa) * cp / den;
  return NulledTmsvParams::from_ecs(e, s, c);
}

inline int tmsv_null_cutoff(double n_s) {
  // Idler occupation is at most about n_s; keep its geometric tail below 1e-14.
  const double q = n_s / (1.0 + n_s);
  if (q <= 0.0) return 20;
  return std::clamp(static_cast<int>(std::ceil(std::log(1e-14) / std::log(q))) + 5, 20, 160);
}

}  // namespace detail

/// Fisher information about n_B at the haloscope operating point n_B = (1 - kappa) n_T.
inline double nb_fisher(const StrategySpec &st, const CavityParams &cav, double kappa, double l) {
  const double nt = cav.n_t, n = l * nt;
  const bool ideal = st.engineering == Engineering::Ideal;
  const double g = st.gain;
  const SourceSpec src{st.source, st.source == SourceKind::Vacuum ? 1.0 : g, ideal ? 0.0 : nt};
  switch (st.receiver) {
    case Receiver::QfiLimit:
      if (st.source == SourceKind::Vacuum) {
        const double m = ideal ? n : nt;
        return 1.0 / (m * (m + 1.0));
      }
      if (!ideal) {
        return st.source == SourceKind::SqueezedVacuum ? detail::sv_qfi_stable(g, nt, kappa, l, n)
                                                       : detail::tmsv_qfi_stable(g, nt, kappa, l, n);
      }
      if (st.source == SourceKind::SqueezedVacuum) {
        const double ns = src.pure_photons();
        const double num = (n + 1.0) * (n + 1.0) + (n + 2.0 * kappa * ns) * (n + 2.0 * kappa * ns) +
                           2.0 * kappa * ns * (kappa + 1.0);
        const double den = (kappa * ns * l * (2.0 * nt + 1.0) + n * (n + 1.0)) *
                           (2.0 * n * (n + 2.0 * kappa * ns + 1.0) + 2.0 * l * kappa * ns + 1.0);
        return num / den;
      } else {
        const double ns = src.pure_photons();
        const double num = l * (2.0 * nt + 1.0) * ns + l * (nt + 1.0);
        const double den = n * l * (nt + 1.0) * (l * (2.0 * nt + 1.0) * ns + n + 1.0);
        return num / den;
      }
    case Receiver::UpperBound: {
      const double ns = st.bound_photons(nt);
      const double ue = 1.0 / (n * (n + 1.0)) + kappa * ns * (2.0 * nt + 1.0) / (n * (n + 1.0) * (n + 1.0) * (nt + 1.0));
      const double tp = 1.0 / (n * l * (nt + 1.0));
      if (st.branch == BoundBranch::UnitaryExtension) return ue;
      if (st.branch == BoundBranch::Teleportation) return tp;
      return std::min(ue, tp);
    }
    case Receiver::Homodyne: {
      if (st.source == SourceKind::Vacuum) {
        const double d = ideal ? 1.0 + 2.0 * n : 1.0 + 2.0 * nt;
        return 2.0 / (d * d);
      }
      const double d = g * l * (2.0 * nt + 1.0) + kappa * (ideal ? 1.0 : 1.0 + 2.0 * nt);
      return 2.0 * g * g / (d * d);
    }
    case Receiver::Bell: {
      const double mu = l * (4.0 * nt + 2.0), nu = ideal ? 1.0 : 2.0 * nt + 1.0, sk = std::sqrt(kappa);
      const double dm = l / (1.0 + sk);  // 1 - sqrt(kappa)
      const double d = g * mu + g * g * dm * dm * nu + (sk + 1.0) * (sk + 1.0) * nu;
      return 16.0 * g * g / (d * d);
    }
    case Receiver::Nulling: {
      std::function<CountDistribution(double)> fam;
      if (st.source == SourceKind::SqueezedVacuum) {
        if (ideal) {
          fam = [=](double nb) { return nulled_sv_distribution(detail::nulled_sv_stable(g, kappa, l, nb), 200); };
        } else {
          fam = [=](double nb) {
            const GaussianState out = detail::channel_output_stable(src, kappa, l, nb);
            return nulled_sv_distribution(NulledSvParams::from_state(symplectic_transform(
                                              out, SymplecticTransform::single_mode_squeeze(-src.squeeze_r()), {0})),
                                          200);
          };
        }
      } else {
        const int nmax = detail::tmsv_null_cutoff(src.pure_photons() + nt);
        if (ideal) {
          const double ns = src.pure_photons();
          fam = [=](double nb) { return nulled_tmsv_distribution(detail::nulled_tmsv_stable(ns, kappa, l, nb), nmax); };
        } else {
          const double r2 = tmsv_null_squeeze(src.squeeze_r(), kappa);
          fam = [=](double nb) {
            const GaussianState out = detail::channel_output_stable(src, kappa, l, nb);
            return nulled_tmsv_distribution(
                NulledTmsvParams::from_state(symplectic_transform(out, SymplecticTransform::two_mode_squeeze(-r2), {0, 1})),
                nmax);
          };
        }
      }
      return fi_from_distribution(fam, n).value;
    }
    case Receiver::PhotonCounting: {
      const double m = ideal ? n : nt;
      return 1.0 / (m * (m + 1.0));
    }
  }
  return 0.0;
}

/// Fisher information about n_a at detuning omega (weak-signal point n_a = 0).
inline FisherResult fisher_spectrum(const StrategySpec &st, const CavityParams &cav, double omega) {
  st.validate();
  cav.validate();
  const Susceptibilities s = susceptibilities(omega, cav);
  FisherResult r;
  r.method = st.receiver == Receiver::Nulling ? FisherMethod::DistributionSum
             : (st.engineering == Engineering::Practical && st.source != SourceKind::Vacuum &&
                st.receiver == Receiver::QfiLimit)
                 ? FisherMethod::GaussianFormula
                 : FisherMethod::ClosedForm;
  r.value = s.chi_ma2 * s.chi_ma2 * nb_fisher(st, cav, s.chi_mm2, s.one_minus_chi_mm2);
  r.params = {{"omega", omega}, {"chi_mm2", s.chi_mm2}, {"chi_ma2", s.chi_ma2}, {"n_b", s.one_minus_chi_mm2 * cav.n_t}};
  return r;
}

/// Practical SV-homodyne spectrum written in the visibility form.
inline double sv_homodyne_visibility_spectrum(const CavityParams &c, double gain, double omega) {
  const double gsum = c.gamma_m + c.gamma_l;  // axion coupling dropped, as in the susceptibilities
  const double inner = (0.25 * gsum * gsum + omega * omega - c.gamma_l * c.gamma_m) / gain + c.gamma_m * c.gamma_l;
  const double nu = 2.0 * c.n_t + 1.0;
  return 2.0 * c.gamma_m * c.gamma_m * c.gamma_a * c.gamma_a / (nu * nu * inner * inner);
}

struct ScanRateResult {
  double total = 0.0;
  double optimum_coupling = std::numeric_limits<double>::quiet_NaN();
  FisherMethod method = FisherMethod::Quadrature;
  double error_estimate = 0.0;
  bool at_boundary = false;
  bool non_unimodal = false;
  std::string note;
};

inline ScanRateResult total_fisher_quadrature(const StrategySpec &st, const CavityParams &cav, double rel_tol = 1e-8) {
  st.validate();
  cav.validate();
  // The teleportation branch falls off only as chi_ma^4 / (1 - chi_mm^2)^2, which tends to a constant.
  if (st.receiver == Receiver::UpperBound && st.branch == BoundBranch::Teleportation) {
    throw DomainError("teleportation-branch bound has a divergent total over detuning");
  }
  const auto q = integrate_real_line([&](double w) { return fisher_spectrum(st, cav, w).value; },
                                     0.5 * cav.gamma_total(), rel_tol);
  ScanRateResult r;
  r.total = q.value;
  r.error_estimate = q.error;
  r.method = FisherMethod::Quadrature;
  r.optimum_coupling = cav.gm_tilde();
  return r;
}

/// Transcribed closed-form totals; std::nullopt where none exists.
inline std::optional<double> total_fisher_closed_value(const StrategySpec &st, const CavityParams &c) {
  const double ga = c.gamma_a, gl = c.gamma_l, gm = c.gamma_m, nt = c.n_t, nu = 2.0 * nt + 1.0;
  const double g = st.gain;
  const bool ideal = st.engineering == Engineering::Ideal;
  const bool vacuum_vl = st.source == SourceKind::Vacuum &&
                         (st.receiver == Receiver::QfiLimit || st.receiver == Receiver::PhotonCounting);
  if (st.receiver == Receiver::UpperBound) {
    if (st.branch != BoundBranch::UnitaryExtension) return std::nullopt;
    const double ns = st.bound_photons(nt);
    const double f = 2.0 * ns * nt + ns + nt + 1.0;
    const double pre = 2.0 * kPi * ga * ga * gm /
                       (nt * (nt + 1.0) * (ga + gl) * std::pow(4.0 * gm * nt * (ga + gl) + (ga + gl + gm) * (ga + gl + gm), 1.5));
    const double br = 2.0 * gl * (ga * f + gm * nu * (ns * nt + nt + 1.0)) + 2.0 * ga * gm * nu * (ns * nt + nt + 1.0) +
                      (ga * ga + gl * gl + gm * gm) * f;
    return pre * br;
  }
  if (ideal) {
    if (vacuum_vl) {
      return 2.0 * kPi * ga * ga * gm /
             (nt * (ga + gl) * std::sqrt(4.0 * gm * nt * (ga + gl) + (ga + gl + gm) * (ga + gl + gm)));
    }
    if (st.receiver == Receiver::Homodyne && st.source == SourceKind::Vacuum) {
      return 8.0 * kPi * ga * ga * gm * gm / std::pow(8.0 * gm * nt * (ga + gl) + (ga + gl + gm) * (ga + gl + gm), 1.5);
    }
    if (st.receiver == Receiver::Homodyne && st.source == SourceKind::SqueezedVacuum) {
      const double ns = SourceSpec{SourceKind::SqueezedVacuum, g, 0.0}.pure_photons();
      const double cp = std::sqrt(ns * (ns + 1.0));
      // 2N - 2C_p + 1 = 1/G, written without cancellation.
      const double m = 1.0 / g;
      return 8.0 * kPi * ga * ga * gm * gm * std::pow(m, 1.5) * (8.0 * ns * (ns + cp + 1.0) + 4.0 * cp + 1.0) /
             std::pow(2.0 * gl * gm * (4.0 * nt - 2.0 * ns + 2.0 * cp + 1.0) + (gl * gl + gm * gm) * m, 1.5);
    }
    if (st.receiver == Receiver::QfiLimit && st.source == SourceKind::Tmsv) {
      const double ns = SourceSpec{SourceKind::Tmsv, g, 0.0}.pure_photons();
      return 2.0 * kPi * ga * ga * gm * (2.0 * nt * ns + nt + ns + 1.0) /
             (nt * (nt + 1.0) * (ga + gl) *
              std::sqrt(2.0 * gl * (ga + gm * nu * (2.0 * ns + 1.0)) + 2.0 * ga * gm * nu * (2.0 * ns + 1.0) + ga * ga +
                        gl * gl + gm * gm));
    }
    return std::nullopt;
  }
  const double gs = ga + gl + gm;
  if (vacuum_vl) return 4.0 * kPi * ga * ga * gm * gm / (nt * (nt + 1.0) * gs * gs * gs);
  if (st.receiver == Receiver::Homodyne && st.source == SourceKind::Vacuum) {
    return 8.0 * kPi * ga * ga * gm * gm / (nu * nu * gs * gs * gs);
  }
  if (st.receiver == Receiver::Homodyne && st.source == SourceKind::SqueezedVacuum) {
    return 8.0 * kPi * g * g * ga * ga * gm * gm /
           (nu * nu * std::pow(2.0 * (2.0 * g - 1.0) * gl * gm + gl * gl + gm * gm, 1.5));
  }
  if (st.receiver == Receiver::QfiLimit && st.source == SourceKind::Tmsv) {
    // Three large terms cancel; extended precision keeps ~1e-10 relative accuracy up to G ~ 1e4.
    using ld = long double;
    const ld G = g, n = nt, v = nu, l = gl, m = gm, a = ga;
    const ld pre = -static_cast<ld>(kPi) * a * a * m / (2.0L * (G - 1) * (G - 1) * G * l * n * n * (n + 1) * (n + 1) * v);
    const ld t1 = std::pow(n, 2.5L) * (G * G * v - 2 * G + 2 * n + 1) * (G * G * v - 2 * G + 2 * n + 1) *
                  std::sqrt(G / (l * m * ((G * G + 1) * v - 2 * G * (n + 1)) + G * (l * l + m * m) * n));
    const ld t2 = std::pow(n + 1, 2.5L) * ((G * G + 1) * v + 2 * G) * ((G * G + 1) * v + 2 * G) *
                  std::sqrt(G / (l * m * ((G * G + 1) * v - 2 * G * n) + G * (l * l + m * m) * (n + 1)));
    const ld w = 2 * n * n + 2 * n + 1;
    const ld t3 = (G + 1) * (G + 1) * v * (v * v * (G * G + 1) + 2 * G) *
                  std::sqrt(G * w / (l * m * (v * v * (G * G + 1) - 4 * G * n * (n + 1)) + G * (l * l + m * m) * w));
    if (g == 1.0) return std::nullopt;
    return static_cast<double>(pre * (t1 - t2 + t3));
  }
  return std::nullopt;
}

inline ScanRateResult total_fisher_closed(const StrategySpec &st, const CavityParams &cav) {
  st.validate();
  cav.validate();
  const auto v = total_fisher_closed_value(st, cav);
  if (v) {
    ScanRateResult r;
    r.total = *v;
    r.method = FisherMethod::ClosedForm;
    r.optimum_coupling = cav.gm_tilde();
    return r;
  }
  ScanRateResult r = total_fisher_quadrature(st, cav);
  r.note = "no closed form for " + st.name() + " (" + to_string(st.engineering) + "); quadrature used";
  return r;
}

/// Limiting optimized totals; std::nullopt where none is known.
inline std::optional<double> total_fisher_asymptote(const StrategySpec &st, const CavityParams &c) {
  const double unit = 2.0 * kPi * c.gamma_l * c.ga_tilde() * c.ga_tilde();
  const double nt = c.n_t, nu = 2.0 * nt + 1.0, g = st.gain;
  const bool ideal = st.engineering == Engineering::Ideal;
  const double ns = SourceSpec{SourceKind::Tmsv, g, 0.0}.pure_photons();
  const bool vacuum_vl = st.source == SourceKind::Vacuum &&
                         (st.receiver == Receiver::QfiLimit || st.receiver == Receiver::PhotonCounting);
  if (st.receiver == Receiver::UpperBound && st.branch != BoundBranch::Teleportation) {
    const double n = st.bound_photons(nt);
    return unit * (1.0 + nt + n * (1.0 + 2.0 * nt)) / (nt * (1.0 + nt));
  }
  if (ideal) {
    if (vacuum_vl) return unit / nt;
    if (st.receiver == Receiver::Homodyne && st.source == SourceKind::Vacuum) return unit * 16.0 / 27.0;
    if (st.receiver == Receiver::Homodyne) return unit * 8.0 * ns / std::pow(3.0, 1.5);
    if (st.receiver == Receiver::QfiLimit && st.source == SourceKind::SqueezedVacuum) {
      return unit * (1.0 + 2.0 * ns) * (1.0 + 2.0 * ns) / (ns + nt + 2.0 * ns * nt);
    }
    if (st.receiver == Receiver::QfiLimit && st.source == SourceKind::Tmsv) {
      return unit * (1.0 + nt + ns * (1.0 + 2.0 * nt)) / (nt * (1.0 + nt));
    }
    return std::nullopt;
  }
  if (vacuum_vl) return 2.0 * unit * 4.0 / (27.0 * nt * (nt + 1.0));
  if (st.receiver == Receiver::Homodyne && st.source == SourceKind::Vacuum) return 2.0 * unit * 8.0 / (27.0 * nu * nu);
  // Maximum of the practical SV-homodyne closed form at gm = 2G for G >> 1.
  if (st.receiver == Receiver::Homodyne) return unit * 2.0 * g / (std::pow(3.0, 1.5) * nu * nu);
  if (st.receiver == Receiver::QfiLimit && st.source == SourceKind::Tmsv) return unit * g / (12.0 * std::sqrt(3.0) * nt);
  return std::nullopt;
}

struct OptimizeOptions {
  int grid_points = 41;
  int dense_factor = 10;
  double rel_tol = 1e-6;
  bool prefer_closed = true;
};

inline double total_fisher(const StrategySpec &st, const CavityParams &cav, bool prefer_closed = true) {
  if (prefer_closed) {
    const auto v = total_fisher_closed_value(st, cav);
    if (v) return *v;
  }
  return total_fisher_quadrature(st, cav).total;
}

/// Maximize the total over gm_tilde in [gm_lo, gm_hi] (log scale).
inline ScanRateResult optimize_coupling(const StrategySpec &st, const CavityParams &cav, double gm_lo, double gm_hi,
                                        const OptimizeOptions &opt = {}) {
  st.validate();
  detail::require(gm_lo > 0.0 && gm_hi > gm_lo, "coupling range must satisfy 0 < lo < hi");
  const bool closed = opt.prefer_closed && total_fisher_closed_value(st, cav.with_gm_ratio(1.0)).has_value();
  auto f = [&](double lg) { return total_fisher(st, cav.with_gm_ratio(std::exp(lg)), opt.prefer_closed); };
  const double a = std::log(gm_lo), b = std::log(gm_hi);
  auto scan = [&](int npts, std::vector<double> &xs, std::vector<double> &ys) {
    xs.resize(npts);
    ys.resize(npts);
    for (int i = 0; i < npts; ++i) {
      xs[i] = a + (b - a) * i / (npts - 1);
      ys[i] = f(xs[i]);
    }
  };
  std::vector<double> xs, ys;
  scan(std::max(3, opt.grid_points), xs, ys);
  int changes = 0, last = 0;
  for (size_t i = 1; i < ys.size(); ++i) {
    const double d = ys[i] - ys[i - 1];
    if (std::abs(d) <= 1e-12 * std::max(std::abs(ys[i]), std::abs(ys[i - 1]))) continue;
    const int sg = d > 0 ? 1 : -1;
    if (last != 0 && sg != last) ++changes;
    last = sg;
  }
  ScanRateResult r;
  r.method = closed ? FisherMethod::ClosedForm : FisherMethod::Quadrature;
  if (changes > 1) {
    r.non_unimodal = true;
    r.note = "objective not unimodal; dense scan used";
    scan(std::max(3, opt.grid_points) * opt.dense_factor, xs, ys);
  }
  const int n = static_cast<int>(ys.size());
  const int k = static_cast<int>(std::max_element(ys.begin(), ys.end()) - ys.begin());
  if (k == 0 || k == n - 1) {
    r.at_boundary = true;
    r.optimum_coupling = k == 0 ? gm_lo : gm_hi;
    r.total = total_fisher(st, cav.with_gm_ratio(r.optimum_coupling), opt.prefer_closed);
    r.note += std::string(r.note.empty() ? "" : "; ") + (k == 0 ? "boundary optimum at range bottom" : "boundary optimum at range top");
    return r;
  }
  // Golden section on the bracketing cell.
  double lo = xs[k - 1], hi = xs[k + 1];
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > opt.rel_tol) {
    if (fc >= fd) {
      hi = d; d = c; fd = fc; c = hi - gr * (hi - lo); fc = f(c);
    } else {
      lo = c; c = d; fc = fd; d = lo + gr * (hi - lo); fd = f(d);
    }
  }
  const double x = 0.5 * (lo + hi);
  r.optimum_coupling = std::exp(x);
  r.total = f(x);
  return r;
}

}  // namespace qnoise

#endif
