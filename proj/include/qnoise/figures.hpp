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

#ifndef QNOISE_FIGURES_HPP
#define QNOISE_FIGURES_HPP

#include <cmath>
#include <string>
#include <vector>

#include "qnoise/errors.hpp"
#include "qnoise/haloscope.hpp"
#include "qnoise/measurements.hpp"
#include "qnoise/parallel.hpp"
#include "qnoise/qfi_closed_form.hpp"

namespace qnoise {

struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct FigureOptions {
  double temp_k = 0.061;
  double omega_c = 2.0 * kPi * 10e9;
  double ga_ratio = 1e-12;
  double n_b = 1e-3;
  double gain_db = 10.0;
  double g_db_max = 20.0;
  int points = 41;
  int threads = 1;
};

inline const std::vector<std::string> &figure_ids() {
  static const std::vector<std::string> ids{"3a", "3b", "4a", "4b", "5a", "5b", "6a", "6b", "7a",
                                            "7b", "8a", "8b", "9a", "9b", "10", "11"};
  return ids;
}

namespace detail {

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

inline double to_db(double x) { return 10.0 * std::log10(x); }

/// Source-quality map over (kappa, G dB); `ratio` receives (N_S, kappa, n_b).
template <class F>
Table source_map(const std::string &title, const std::string &col, const FigureOptions &o, F ratio) {
  const int nk = std::max(2, o.points / 2), ng = std::max(2, o.points / 2);
  const auto ks = linspace(0.05, 1.0, nk), gs = linspace(0.0, o.g_db_max, ng);
  Table t{title, {"kappa", "G_dB", col, col + "_dB"}, {}};
  const auto rows = parallel_map(ks.size() * gs.size(), o.threads, [&](std::size_t i) {
    const double k = ks[i / gs.size()], g = gs[i % gs.size()];
    const double ns = SourceSpec{SourceKind::Tmsv, db_to_linear(g), 0.0}.pure_photons();
    const double r = ratio(ns, k, o.n_b);
    return std::vector<double>{k, g, r, to_db(r)};
  });
  t.rows = rows;
  return t;
}

inline Table receivers_vs_gain(const std::string &title, double kappa, const FigureOptions &o) {
  Table t{title,
          {"G_dB", "vl", "vac_pc", "sv_qfi", "tmsv_qfi", "ub", "sv_hom", "bell", "sv_null", "tmsv_null"},
          {}};
  const double nb = o.n_b;
  const double norm = fi_homodyne_vacuum(nb).value;
  const auto gs = linspace(0.0, o.g_db_max, o.points);
  t.rows = parallel_map(gs.size(), o.threads, [&](std::size_t i) {
    const double g = db_to_linear(gs[i]);
    const double ns = SourceSpec{SourceKind::Tmsv, g, 0.0}.pure_photons();
    const int nmax = tmsv_null_cutoff(ns);
    const double svn = fi_from_distribution([&](double b) { return nulled_sv_distribution(g, kappa, b); }, nb).value;
    const double tn =
        fi_from_distribution([&](double b) { return nulled_tmsv_distribution(ns, kappa, b, nmax); }, nb).value;
    const std::vector<double> v{qfi_vacuum_limit(nb).value, fi_photon_counting_vacuum(nb, 0.0, kappa).value,
                                qfi_sv(ns, kappa, nb).value, qfi_tmsv(ns, kappa, nb).value,
                                ub_combined(ns, kappa, nb).value, fi_homodyne_sv(g, kappa, nb).value,
                                fi_bell(g, kappa, nb).value, svn, tn};
    std::vector<double> row{gs[i]};
    for (double x : v) row.push_back(to_db(x / norm));
    return row;
  });
  return t;
}

inline CavityParams figure_cavity(const FigureOptions &o) {
  return CavityParams::physical(1.0, o.ga_ratio, o.temp_k, o.omega_c);
}

inline Table spectrum_figure(const std::string &title, Engineering eng, bool over_coupled, const FigureOptions &o) {
  const double g = db_to_linear(o.gain_db);
  const CavityParams base = figure_cavity(o);
  const CavityParams cav = base.with_gm_ratio(over_coupled ? 2.0 * g : 1.0);
  const std::vector<std::string> names{"vl", "vac-hom", "sv-qfi", "sv-hom", "sv-null", "tmsv-qfi", "bell", "tmsv-null", "ub"};
  // Peak of the vacuum-homodyne spectrum at critical coupling.
  const double norm =
      fisher_spectrum(parse_strategy("vac-hom", 1.0, eng), base.with_gm_ratio(1.0), 0.0).value;
  Table t{title, {"omega_over_gamma_l"}, {}};
  for (const auto &n : names) t.columns.push_back(n);
  const auto ws = linspace(0.0, 3.0 * (cav.gamma_m + cav.gamma_l) / cav.gamma_l, o.points);
  t.rows = parallel_map(ws.size(), o.threads, [&](std::size_t i) {
    std::vector<double> row{ws[i]};
    for (const auto &n : names) {
      row.push_back(to_db(fisher_spectrum(parse_strategy(n, g, eng), cav, ws[i] * cav.gamma_l).value / norm));
    }
    return row;
  });
  return t;
}

inline double vac_hom_optimum(Engineering eng, const CavityParams &cav) {
  return optimize_coupling(parse_strategy("vac-hom", 1.0, eng), cav, 1e-2, 1e4).total;
}

inline Table scan_vs_coupling(const std::string &title, Engineering eng, const FigureOptions &o) {
  const double g = db_to_linear(o.gain_db);
  const CavityParams cav = figure_cavity(o);
  const double norm = vac_hom_optimum(eng, cav);
  const std::vector<std::string> names{"vl", "vac-hom", "sv-qfi", "sv-hom", "tmsv-qfi", "ub-ue"};
  Table t{title, {"gm_ratio_dB"}, {}};
  for (const auto &n : names) t.columns.push_back(n);
  const auto xs = linspace(-20.0, 40.0, o.points);
  t.rows = parallel_map(xs.size(), o.threads, [&](std::size_t i) {
    const CavityParams c = cav.with_gm_ratio(db_to_linear(xs[i]));
    std::vector<double> row{xs[i]};
    for (const auto &n : names) row.push_back(to_db(total_fisher(parse_strategy(n, g, eng), c) / norm));
    return row;
  });
  return t;
}

inline Table scan_vs_gain(const std::string &title, Engineering eng, const FigureOptions &o) {
  const CavityParams cav = figure_cavity(o);
  const double norm = vac_hom_optimum(eng, cav);
  const std::vector<std::string> names{"vl", "vac-hom", "sv-qfi", "sv-hom", "tmsv-qfi", "ub-ue"};
  Table t{title, {"G_dB"}, {}};
  for (const auto &n : names) {
    t.columns.push_back(n);
    t.columns.push_back(n + "_gm_opt");
  }
  const auto gs = linspace(0.0, std::max(o.g_db_max, 30.0), o.points);
  t.rows = parallel_map(gs.size(), o.threads, [&](std::size_t i) {
    std::vector<double> row{gs[i]};
    for (const auto &n : names) {
      const auto r = optimize_coupling(parse_strategy(n, db_to_linear(gs[i]), eng), cav, 1e-2, 1e6);
      row.push_back(to_db(r.total / norm));
      row.push_back(r.optimum_coupling);
    }
    return row;
  });
  return t;
}

inline int direct_pd_cutoff(double n_s) {
  const double q = n_s / (1.0 + n_s);
  return std::clamp(static_cast<int>(std::ceil(std::log(1e-14) / std::log(q))) + 5, 20, 400);
}

inline Table null_vs_direct(const FigureOptions &o) {
  const std::vector<double> kappas{0.3, 0.6, 0.9, 1.0};
  Table t{"10", {"N_S"}, {}};
  for (double k : kappas) t.columns.push_back("ratio_kappa_" + std::to_string(k).substr(0, 3));
  std::vector<double> ns;
  for (double e : linspace(-2.0, 1.0, o.points)) ns.push_back(std::pow(10.0, e));
  t.rows = parallel_map(ns.size(), o.threads, [&](std::size_t i) {
    std::vector<double> row{ns[i]};
    const int nmax = direct_pd_cutoff(ns[i]);
    for (double k : kappas) {
      const double a =
          fi_from_distribution([&](double b) { return nulled_tmsv_distribution(ns[i], k, b, nmax); }, o.n_b).value;
      row.push_back(a / fi_direct_pd_tmsv(ns[i], k, o.n_b, nmax).value);
    }
    return row;
  });
  return t;
}

inline Table sv_piecewise(const FigureOptions &o) {
  const CavityParams cav = figure_cavity(o);
  const double norm = vac_hom_optimum(Engineering::Ideal, cav);
  Table t{"11", {"G_dB", "critical", "over_coupled", "optimized", "gm_opt"}, {}};
  const auto gs = linspace(0.0, std::max(o.g_db_max, 30.0), o.points);
  t.rows = parallel_map(gs.size(), o.threads, [&](std::size_t i) {
    const StrategySpec st = parse_strategy("sv-qfi", db_to_linear(gs[i]), Engineering::Ideal);
    const double crit = total_fisher(st, cav.with_gm_ratio(1.0));
    const double over = *total_fisher_asymptote(st, cav);
    const auto opt = optimize_coupling(st, cav, 1e-2, 1e6);
    return std::vector<double>{gs[i], to_db(crit / norm), to_db(over / norm), to_db(opt.total / norm),
                               opt.optimum_coupling};
  });
  return t;
}

}  // namespace detail

/// Plot-ready data for a figure id (see figure_ids()).
inline Table figure_data(const std::string &id, const FigureOptions &o = {}) {
  detail::require(o.points >= 2, "figure needs at least 2 points");
  if (id == "3a") {
    return detail::source_map("3a", "tmsv_over_ub", o, [](double n, double k, double b) {
      return qfi_tmsv(n, k, b).value / ub_combined(n, k, b).value;
    });
  }
  if (id == "3b") {
    return detail::source_map("3b", "sv_over_ub", o, [](double n, double k, double b) {
      return qfi_sv(n, k, b).value / ub_combined(n, k, b).value;
    });
  }
  if (id == "7a") {
    return detail::source_map("7a", "tmsv_over_vl", o, [](double n, double k, double b) {
      return qfi_tmsv(n, k, b).value / qfi_vacuum_limit(b).value;
    });
  }
  if (id == "7b") {
    return detail::source_map("7b", "sv_over_vl", o, [](double n, double k, double b) {
      return qfi_sv(n, k, b).value / qfi_vacuum_limit(b).value;
    });
  }
  if (id == "4a") return detail::receivers_vs_gain("4a", 1.0, o);
  if (id == "4b") return detail::receivers_vs_gain("4b", 0.6, o);
  if (id == "5a") return detail::scan_vs_coupling("5a", Engineering::Ideal, o);
  if (id == "5b") return detail::scan_vs_gain("5b", Engineering::Ideal, o);
  if (id == "6a") return detail::spectrum_figure("6a", Engineering::Ideal, false, o);
  if (id == "6b") return detail::spectrum_figure("6b", Engineering::Ideal, true, o);
  if (id == "8a") return detail::spectrum_figure("8a", Engineering::Practical, false, o);
  if (id == "8b") return detail::spectrum_figure("8b", Engineering::Practical, true, o);
  if (id == "9a") return detail::scan_vs_coupling("9a", Engineering::Practical, o);
  if (id == "9b") return detail::scan_vs_gain("9b", Engineering::Practical, o);
  if (id == "10") return detail::null_vs_direct(o);
  if (id == "11") return detail::sv_piecewise(o);
  throw DomainError("unknown figure id '" + id + "'");
}

}  // namespace qnoise

#endif
