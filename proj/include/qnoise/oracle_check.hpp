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

#ifndef QNOISE_ORACLE_CHECK_HPP
#define QNOISE_ORACLE_CHECK_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qnoise/errors.hpp"
#include "qnoise/fock_oracle.hpp"
#include "qnoise/measurements.hpp"
#include "qnoise/parallel.hpp"
#include "qnoise/qfi_closed_form.hpp"

namespace qnoise {

struct OracleGridOptions {
  std::vector<double> kappas{0.3, 0.6, 1.0};
  std::vector<double> n_bs{1e-3, 0.1, 0.5};
  std::vector<double> gains{1.0, 4.0, 10.0};
  int single_cutoff = 60;
  int two_mode_cutoff = 40;
  // Source truncation allowed before the point is reported as a failure.
  double single_tail = 1e-5;
  double two_mode_tail = 1e-6;
  double rel_tol = 1e-3;
  int threads = 1;
};

struct OracleRow {
  std::string source;
  double kappa = 0.0;
  double n_b = 0.0;
  double gain = 1.0;
  double oracle = 0.0;
  double closed = 0.0;
  double rel_dev = 0.0;
  double tail_mass = 0.0;
  bool ok = false;
  std::string note;
};

struct OracleReport {
  std::vector<OracleRow> rows;
  double worst_rel_dev = 0.0;
  int failures = 0;
  bool passed() const { return failures == 0; }
};

/// Fock finite-difference QFI against the vacuum, SV and TMSV closed forms.
inline OracleReport oracle_qfi_grid(const OracleGridOptions &o = {}) {
  struct Point {
    SourceKind kind;
    double k, nb, g;
  };
  std::vector<Point> pts;
  for (double k : o.kappas) {
    for (double nb : o.n_bs) {
      pts.push_back({SourceKind::Vacuum, k, nb, 1.0});
      for (double g : o.gains) {
        pts.push_back({SourceKind::SqueezedVacuum, k, nb, g});
        pts.push_back({SourceKind::Tmsv, k, nb, g});
      }
    }
  }
  OracleReport rep;
  rep.rows = parallel_map(pts.size(), o.threads, [&](std::size_t i) {
    const Point &p = pts[i];
    const SourceSpec spec{p.kind, p.g, 0.0};
    OracleRow row;
    row.source = to_string(p.kind);
    row.kappa = p.k;
    row.n_b = p.nb;
    row.gain = p.g;
    const double ns = spec.pure_photons();
    row.closed = p.kind == SourceKind::Vacuum           ? qfi_vacuum_limit(p.nb).value
                 : p.kind == SourceKind::SqueezedVacuum ? qfi_sv(ns, p.k, p.nb).value
                                                        : qfi_tmsv(ns, p.k, p.nb).value;
    const bool two = p.kind == SourceKind::Tmsv;
    try {
      const FockOptions fo{two ? o.two_mode_tail : o.single_tail, 400};
      const auto fam = fock_channel_family(spec, p.k, two ? o.two_mode_cutoff : o.single_cutoff, fo);
      const FisherResult j = qfi_finite_diff(fam, p.nb);
      row.oracle = j.value;
      row.tail_mass = j.param("tail_mass");
      row.rel_dev = std::abs(row.oracle / row.closed - 1.0);
      row.ok = row.rel_dev < o.rel_tol;
      if (!row.ok) row.note = "deviation above tolerance";
    } catch (const ConvergenceError &e) {
      row.ok = false;
      row.rel_dev = std::numeric_limits<double>::infinity();
      row.note = e.what();
    }
    return row;
  });
  for (const auto &r : rep.rows) {
    rep.worst_rel_dev = std::max(rep.worst_rel_dev, r.rel_dev);
    if (!r.ok) ++rep.failures;
  }
  return rep;
}

struct DistributionCheck {
  std::string name;
  double max_abs_dev = 0.0;
  double normalization_dev = 0.0;
  bool ok = false;
};

struct DistributionReport {
  double kappa = 0.6, n_b = 1e-3, gain = 10.0;
  std::vector<DistributionCheck> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const DistributionCheck &c) { return c.ok; });
  }
};

/// Legendre and hypergeometric count laws against explicit anti-squeezing in the number basis.
inline DistributionReport oracle_distribution_check(double kappa = 0.6, double n_b = 1e-3, double gain = 10.0,
                                                    int two_mode_cutoff = 60, double tol = 1e-8,
                                                    double norm_tol = 1e-9) {
  DistributionReport rep{kappa, n_b, gain, {}};
  const SourceSpec sv{SourceKind::SqueezedVacuum, gain, 0.0};
  const CountDistribution dsv = nulled_sv_distribution(gain, kappa, n_b, 400);
  const Eigen::VectorXd fsv = fock_nulled_sv_distribution(gain, kappa, n_b, cutoff_for_tail(sv, 1e-14));
  DistributionCheck c1{"sv_legendre"};
  for (int n = 0; n < fsv.size() && n < static_cast<int>(dsv.size()); ++n) {
    c1.max_abs_dev = std::max(c1.max_abs_dev, std::abs(fsv(n) - dsv.prob(n)));
  }
  c1.normalization_dev = std::abs(dsv.total() - 1.0);
  c1.ok = c1.max_abs_dev < tol && c1.normalization_dev < norm_tol;
  rep.checks.push_back(c1);

  const double ns = SourceSpec{SourceKind::Tmsv, gain, 0.0}.pure_photons();
  const NulledTmsvParams prm = NulledTmsvParams::from_channel(ns, kappa, n_b);
  const int d = two_mode_cutoff;
  const Eigen::VectorXd ftm = fock_nulled_tmsv_distribution(gain, kappa, n_b, d, {1e-10, d});
  const auto compare = [&](const std::string &name, const CountDistribution &dist) {
    DistributionCheck c{name};
    for (int r = 0; r < d; ++r) {
      for (int a = 0; a < d; ++a) c.max_abs_dev = std::max(c.max_abs_dev, std::abs(ftm(r * d + a) - dist.prob(r, a)));
    }
    c.normalization_dev = std::abs(dist.total() - 1.0);
    c.ok = c.max_abs_dev < tol && c.normalization_dev < norm_tol;
    rep.checks.push_back(c);
  };
  compare("tmsv_terminating", nulled_tmsv_distribution(prm, 160));
  try {
    compare("tmsv_hypergeometric", nulled_tmsv_distribution_series(prm, 160));
  } catch (const DomainError &e) {
    rep.checks.push_back({std::string("tmsv_hypergeometric: ") + e.what(), 0.0, 0.0, false});
  }
  return rep;
}

}  // namespace qnoise

#endif
