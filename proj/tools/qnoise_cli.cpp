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

// Command-line front end for the qnoise library.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "qnoise/qnoise.hpp"

namespace {

using json = nlohmann::ordered_json;
using qnoise::ConfigError;
using qnoise::DomainError;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

double parse_number(const std::string &s, const std::string &what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw ConfigError("cannot parse " + what + " '" + s + "'");
  }
}

/// "10dB" (power ratio in decibels) or a linear gain such as "10".
double parse_gain(std::string s) {
  std::string t;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  }
  double g;
  if (t.size() > 2 && (t.substr(t.size() - 2) == "dB" || t.substr(t.size() - 2) == "db")) {
    g = qnoise::db_to_linear(parse_number(t.substr(0, t.size() - 2), "gain"));
  } else {
    g = parse_number(t, "gain");
  }
  if (!(g >= 1.0) || !std::isfinite(g)) throw DomainError("gain must be >= 1 (0 dB), got '" + s + "'");
  return g;
}

/// "lo:hi:n" (linear) or "lo:hi:n:log".
std::vector<double> parse_grid(const std::string &s, const std::string &what) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3 && !(parts.size() == 4 && parts[3] == "log")) {
    throw ConfigError(what + " must look like lo:hi:n or lo:hi:n:log, got '" + s + "'");
  }
  const double lo = parse_number(parts[0], what), hi = parse_number(parts[1], what);
  const double nd = parse_number(parts[2], what);
  if (!(nd >= 1.0) || nd != std::floor(nd)) throw ConfigError(what + " point count must be a positive integer");
  const int n = static_cast<int>(nd);
  const bool lg = parts.size() == 4;
  if (n > 1 && !(hi > lo)) throw ConfigError(what + " must be strictly increasing");
  if (lg && !(lo > 0.0)) throw ConfigError(what + " log grid needs lo > 0");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    v[i] = lg ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
  }
  return v;
}

qnoise::SourceKind parse_source(const std::string &s) {
  if (s == "vacuum" || s == "vac") return qnoise::SourceKind::Vacuum;
  if (s == "sv") return qnoise::SourceKind::SqueezedVacuum;
  if (s == "tmsv") return qnoise::SourceKind::Tmsv;
  throw DomainError("unknown source '" + s + "' (vacuum, sv, tmsv)");
}

qnoise::Engineering parse_engineering(const std::string &s) {
  if (s == "ideal") return qnoise::Engineering::Ideal;
  if (s == "practical") return qnoise::Engineering::Practical;
  throw DomainError("unknown engineering '" + s + "' (ideal, practical)");
}

class Output {
 public:
  explicit Output(const std::string &path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream &os() { return file_.is_open() ? static_cast<std::ostream &>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void write_csv(std::ostream &os, const std::vector<std::string> &cols, const std::vector<std::vector<double>> &rows) {
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto &r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt(r[i]);
    os << "\n";
  }
}

/// Doubles as JSON numbers where finite, as strings otherwise.
json jnum(double v) { return std::isfinite(v) ? json(v) : json(fmt(v)); }

struct CavityFlags {
  double gm_ratio = 1.0;
  double temp_mk = 61.0;
  double fc_ghz = 10.0;
  double ga_ratio = 1e-12;
  double n_t = 0.0;

  void add(CLI::App *app, bool with_gm = true) {
    if (with_gm) app->add_option("--gm-ratio", gm_ratio, "measurement-port coupling over intrinsic loss");
    app->add_option("--temp-mK", temp_mk, "cavity temperature in millikelvin");
    app->add_option("--fc-GHz", fc_ghz, "cavity center frequency in GHz");
    app->add_option("--ga-ratio", ga_ratio, "axion coupling over intrinsic loss");
    app->add_option("--nt", n_t, "bath occupation; overrides --temp-mK when > 0");
  }

  qnoise::CavityParams cavity() const {
    const double wc = 2.0 * qnoise::kPi * fc_ghz * 1e9;
    if (n_t > 0.0) return qnoise::CavityParams::with_occupation(gm_ratio, ga_ratio, n_t, 1.0, wc);
    return qnoise::CavityParams::physical(gm_ratio, ga_ratio, temp_mk * 1e-3, wc);
  }
};

struct ChannelFlags {
  double kappa = 1.0;
  double n_b = 1e-3;
  double n_t = 0.0;
  std::string gain = "10dB";
  std::string source = "tmsv";

  void add(CLI::App *app) {
    app->add_option("--kappa", kappa, "channel transmissivity");
    app->add_option("--nb", n_b, "channel added noise n_B");
    app->add_option("--nt", n_t, "thermal occupation of the source modes");
    app->add_option("--G", gain, "source gain, e.g. 10dB or 10");
    app->add_option("--source", source, "vacuum, sv or tmsv");
  }

  qnoise::SourceSpec spec() const {
    const auto k = parse_source(source);
    const qnoise::SourceSpec s{k, k == qnoise::SourceKind::Vacuum ? 1.0 : parse_gain(gain), n_t};
    s.validate();
    return s;
  }
};

// ---------------------------------------------------------------------------

int cmd_qfi(const ChannelFlags &f, const std::string &out) {
  const auto src = f.spec();
  qnoise::ChannelParams{f.kappa, f.n_b}.validate();
  const double ns = src.pure_photons();
  qnoise::FisherResult r;
  if (src.n_t > 0.0) {
    r = qnoise::qfi_gaussian_source(src, f.kappa, f.n_b);
  } else if (src.kind == qnoise::SourceKind::Vacuum) {
    r = qnoise::qfi_vacuum_limit(f.n_b);
  } else if (src.kind == qnoise::SourceKind::SqueezedVacuum) {
    r = qnoise::qfi_sv(ns, f.kappa, f.n_b);
  } else {
    r = qnoise::qfi_tmsv(ns, f.kappa, f.n_b);
  }
  const double ub_photons = src.kind == qnoise::SourceKind::Vacuum ? 0.0 : src.signal_photons();
  Output o(out);
  o.os() << "source,G,kappa,n_b,n_t,qfi,vacuum_limit,ub_combined,method\n";
  o.os() << f.source << "," << fmt(src.gain) << "," << fmt(f.kappa) << "," << fmt(f.n_b) << "," << fmt(src.n_t) << ","
         << fmt(r.value) << "," << fmt(qnoise::qfi_vacuum_limit(f.n_b).value) << ","
         << fmt(qnoise::ub_combined(ub_photons, f.kappa, f.n_b).value) << "," << qnoise::to_string(r.method) << "\n";
  return 0;
}

int cmd_fi(const ChannelFlags &f, const std::string &receiver, int n_max, const std::string &out) {
  using qnoise::SourceKind;
  const auto src = f.spec();
  qnoise::ChannelParams{f.kappa, f.n_b}.validate();
  const auto need = [&](bool ok) {
    if (!ok) throw DomainError("receiver '" + receiver + "' does not accept source '" + f.source + "'");
  };
  qnoise::FisherResult r;
  if (receiver == "homodyne") {
    need(src.kind != SourceKind::Tmsv);
    r = src.kind == SourceKind::Vacuum ? qnoise::fi_homodyne_vacuum(f.n_b, f.n_t, f.kappa)
                                       : qnoise::fi_homodyne_sv(src.gain, f.kappa, f.n_b, f.n_t);
  } else if (receiver == "bell") {
    need(src.kind == SourceKind::Tmsv);
    r = qnoise::fi_bell(src.gain, f.kappa, f.n_b, f.n_t);
  } else if (receiver == "photon-counting") {
    need(src.kind == SourceKind::Vacuum);
    r = qnoise::fi_photon_counting_vacuum(f.n_b, f.n_t, f.kappa);
  } else if (receiver == "nulling") {
    need(src.kind != SourceKind::Vacuum);
    const auto fam = src.kind == SourceKind::SqueezedVacuum ? qnoise::nulled_sv_family(src, f.kappa, n_max)
                                                            : qnoise::nulled_tmsv_family(src, f.kappa, n_max);
    r = qnoise::fi_from_distribution(fam, f.n_b);
  } else if (receiver == "direct-pd") {
    need(src.kind == SourceKind::Tmsv);
    if (src.n_t > 0.0) throw DomainError("direct-pd supports only ideal (n_t = 0) sources");
    r = qnoise::fi_direct_pd_tmsv(src.pure_photons(), f.kappa, f.n_b, n_max);
  } else {
    throw DomainError("unknown receiver '" + receiver + "' (homodyne, bell, photon-counting, nulling, direct-pd)");
  }
  Output o(out);
  o.os() << "receiver,source,G,kappa,n_b,n_t,fi,method,flagged\n";
  o.os() << receiver << "," << f.source << "," << fmt(src.gain) << "," << fmt(f.kappa) << "," << fmt(f.n_b) << ","
         << fmt(f.n_t) << "," << fmt(r.value) << "," << qnoise::to_string(r.method) << "," << (r.flagged ? 1 : 0)
         << "\n";
  if (r.flagged) std::cerr << "warning: " << r.note << "\n";
  return 0;
}

std::vector<qnoise::StrategySpec> strategies(const std::vector<std::string> &names, const std::string &gain,
                                             const std::string &eng) {
  std::vector<qnoise::StrategySpec> v;
  const double g = parse_gain(gain);
  for (const auto &n : names) v.push_back(qnoise::parse_strategy(n, g, parse_engineering(eng)));
  return v;
}

int cmd_spectrum(const CavityFlags &cf, const std::vector<std::string> &names, const std::string &gain,
                 const std::string &eng, const std::string &grid, int threads, const std::string &out) {
  const auto cav = cf.cavity();
  const auto st = strategies(names, gain, eng);
  const auto ws = parse_grid(grid, "--omega-grid");
  std::vector<std::string> cols{"omega_over_gamma_l", "chi_mm2", "chi_ma2"};
  for (const auto &s : st) cols.push_back(s.name());
  const auto rows = qnoise::parallel_map(ws.size(), threads, [&](std::size_t i) {
    const double w = ws[i] * cav.gamma_l;
    const auto sus = qnoise::susceptibilities(w, cav);
    std::vector<double> r{ws[i], sus.chi_mm2, sus.chi_ma2};
    for (const auto &s : st) r.push_back(qnoise::fisher_spectrum(s, cav, w).value);
    return r;
  });
  Output o(out);
  write_csv(o.os(), cols, rows);
  return 0;
}

int cmd_scanrate(CavityFlags cf, const std::vector<std::string> &names, const std::string &gain,
                 const std::string &eng, const std::string &gm_grid, const std::string &method, int threads,
                 const std::string &out) {
  if (method != "auto" && method != "closed" && method != "quadrature") {
    throw DomainError("unknown method '" + method + "' (auto, closed, quadrature)");
  }
  const auto st = strategies(names, gain, eng);
  const auto gms = gm_grid.empty() ? std::vector<double>{cf.gm_ratio} : parse_grid(gm_grid, "--gm-grid");
  const auto cav0 = cf.cavity();
  std::vector<std::string> cols{"gm_ratio"};
  for (const auto &s : st) {
    cols.push_back(s.name());
    cols.push_back(s.name() + "_closed_form");
  }
  const auto rows = qnoise::parallel_map(gms.size(), threads, [&](std::size_t i) {
    const auto cav = cav0.with_gm_ratio(gms[i]);
    std::vector<double> r{gms[i]};
    for (const auto &s : st) {
      qnoise::ScanRateResult res;
      if (method == "quadrature") {
        res = qnoise::total_fisher_quadrature(s, cav);
      } else {
        res = qnoise::total_fisher_closed(s, cav);
        if (method == "closed" && res.method != qnoise::FisherMethod::ClosedForm) {
          throw DomainError("no closed-form total for " + s.name());
        }
      }
      r.push_back(res.total);
      r.push_back(res.method == qnoise::FisherMethod::ClosedForm ? 1.0 : 0.0);
    }
    return r;
  });
  Output o(out);
  write_csv(o.os(), cols, rows);
  return 0;
}

int cmd_optimize(const CavityFlags &cf, const std::vector<std::string> &names, const std::string &gain,
                 const std::string &g_grid, const std::string &eng, double gm_min, double gm_max, int points,
                 int threads, const std::string &out) {
  std::vector<double> gdb;
  if (g_grid.empty()) {
    gdb.push_back(qnoise::linear_to_db(parse_gain(gain)));
  } else {
    gdb = parse_grid(g_grid, "--G-grid");
  }
  const auto cav = cf.cavity();
  const auto e = parse_engineering(eng);
  for (const auto &n : names) qnoise::parse_strategy(n, 1.0, e);
  std::vector<std::string> cols{"G_dB"};
  for (const auto &n : names) {
    for (const char *suffix : {"_total", "_gm_opt", "_at_boundary", "_non_unimodal", "_asymptote"}) {
      cols.push_back(n + suffix);
    }
  }
  qnoise::OptimizeOptions opt;
  opt.grid_points = points;
  const auto rows = qnoise::parallel_map(gdb.size(), threads, [&](std::size_t i) {
    std::vector<double> r{gdb[i]};
    for (const auto &n : names) {
      const auto s = qnoise::parse_strategy(n, qnoise::db_to_linear(gdb[i]), e);
      const auto res = qnoise::optimize_coupling(s, cav, gm_min, gm_max, opt);
      const auto asym = qnoise::total_fisher_asymptote(s, cav);
      r.insert(r.end(), {res.total, res.optimum_coupling, res.at_boundary ? 1.0 : 0.0, res.non_unimodal ? 1.0 : 0.0,
                         asym ? *asym : std::numeric_limits<double>::quiet_NaN()});
    }
    return r;
  });
  Output o(out);
  write_csv(o.os(), cols, rows);
  return 0;
}

int cmd_figure(const std::string &id, const CavityFlags &cf, double n_b, const std::string &gain, int points,
               int threads, const std::string &out) {
  qnoise::FigureOptions fo;
  fo.temp_k = cf.temp_mk * 1e-3;
  fo.omega_c = 2.0 * qnoise::kPi * cf.fc_ghz * 1e9;
  fo.ga_ratio = cf.ga_ratio;
  fo.n_b = n_b;
  fo.gain_db = qnoise::linear_to_db(parse_gain(gain));
  fo.points = points;
  fo.threads = threads;
  const auto t = qnoise::figure_data(id, fo);
  Output o(out);
  write_csv(o.os(), t.columns, t.rows);
  return 0;
}

int cmd_oracle_check(int cutoff, int two_mode_cutoff, bool two_mode, int threads, const std::string &out) {
  json rep;
  bool ok;
  if (two_mode) {
    const auto d = qnoise::oracle_distribution_check(0.6, 1e-3, 10.0, two_mode_cutoff > 0 ? two_mode_cutoff : 60);
    rep["check"] = "nulled_distributions";
    rep["kappa"] = d.kappa;
    rep["n_b"] = d.n_b;
    rep["G"] = d.gain;
    for (const auto &c : d.checks) {
      rep["results"].push_back({{"name", c.name},
                                {"max_abs_dev", jnum(c.max_abs_dev)},
                                {"normalization_dev", jnum(c.normalization_dev)},
                                {"ok", c.ok}});
    }
    ok = d.passed();
  } else {
    qnoise::OracleGridOptions go;
    go.threads = threads;
    if (cutoff > 0) go.single_cutoff = go.two_mode_cutoff = cutoff;
    if (two_mode_cutoff > 0) go.two_mode_cutoff = two_mode_cutoff;
    const auto r = qnoise::oracle_qfi_grid(go);
    rep["check"] = "qfi_grid";
    rep["single_cutoff"] = go.single_cutoff;
    rep["two_mode_cutoff"] = go.two_mode_cutoff;
    rep["rel_tol"] = go.rel_tol;
    rep["worst_rel_dev"] = jnum(r.worst_rel_dev);
    rep["failures"] = r.failures;
    for (const auto &row : r.rows) {
      json j{{"source", row.source}, {"kappa", row.kappa},       {"n_b", row.n_b},
             {"G", row.gain},        {"oracle", jnum(row.oracle)}, {"closed", jnum(row.closed)},
             {"rel_dev", jnum(row.rel_dev)}, {"tail_mass", jnum(row.tail_mass)}, {"ok", row.ok}};
      if (!row.note.empty()) j["note"] = row.note;
      rep["results"].push_back(j);
    }
    ok = r.passed();
  }
  rep["passed"] = ok;
  Output o(out);
  o.os() << rep.dump(2) << "\n";
  return ok ? 0 : 2;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int cmd_sample(const std::optional<std::uint64_t> &seed, const std::string &model, double n_b, double kappa,
               const std::string &gain, int samples, int reps, int n_max, int threads, const std::string &out,
               const std::string &counts_out) {
  if (!seed) throw ConfigError("sample requires an explicit --seed for reproducibility");
  if (samples < 1 || reps < 1) throw DomainError("--samples and --replications must be >= 1");
  std::function<qnoise::CountDistribution(double)> fam;
  if (model == "geometric") {
    const int nm = n_max > 0 ? n_max : 400;
    fam = [nm](double nb) { return qnoise::geometric_distribution(nb, nm); };
  } else if (model == "tmsv-null") {
    const double ns = qnoise::SourceSpec{qnoise::SourceKind::Tmsv, parse_gain(gain), 0.0}.pure_photons();
    const int nm = n_max > 0 ? n_max : 40;
    fam = [ns, kappa, nm](double nb) { return qnoise::nulled_tmsv_distribution(ns, kappa, nb, nm); };
  } else {
    throw DomainError("unknown model '" + model + "' (geometric, tmsv-null)");
  }
  if (!(n_b > 0.0)) throw DomainError("--nb must be > 0");
  const auto truth = fam(n_b);
  const double fi = qnoise::fi_from_distribution(fam, n_b).value;
  const double crb = 1.0 / (samples * fi);
  const auto ests = qnoise::parallel_map(static_cast<std::size_t>(reps), threads, [&](std::size_t i) {
    const auto s = qnoise::sample_counts(truth, samples, splitmix64(*seed + i));
    return qnoise::mle_estimate(s, fam, 1e-3 * n_b, 1e2 * n_b);
  });
  double mean = 0.0;
  int boundary = 0;
  for (const auto &e : ests) {
    mean += e.estimate;
    boundary += e.at_boundary ? 1 : 0;
  }
  mean /= reps;
  double var = 0.0;
  for (const auto &e : ests) var += (e.estimate - mean) * (e.estimate - mean);
  var = reps > 1 ? var / (reps - 1) : std::numeric_limits<double>::quiet_NaN();
  if (!out.empty()) {
    Output o(out);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < reps; ++i) {
      rows.push_back({static_cast<double>(i), ests[i].estimate, ests[i].log_likelihood, ests[i].at_boundary ? 1.0 : 0.0});
    }
    write_csv(o.os(), {"replication", "estimate", "log_likelihood", "at_boundary"}, rows);
  }
  if (!counts_out.empty()) {
    const auto s = qnoise::sample_counts(truth, samples, splitmix64(*seed));
    std::map<std::int64_t, std::int64_t> hist;
    for (auto v : s) ++hist[v];
    Output o(counts_out);
    o.os() << "outcome,count\n";
    for (const auto &[k, c] : hist) o.os() << k << "," << c << "\n";
  }
  json rep{{"model", model},
           {"n_b", n_b},
           {"samples", samples},
           {"replications", reps},
           {"seed", *seed},
           {"fisher_information", jnum(fi)},
           {"crb_variance", jnum(crb)},
           {"mean_estimate", jnum(mean)},
           {"empirical_variance", jnum(var)},
           {"variance_over_crb", jnum(var / crb)},
           {"boundary_estimates", boundary}};
  std::cout << rep.dump(2) << "\n";
  return 0;
}

int cmd_distributed(const std::vector<int> &ms, double kappa, double n_b, int n_states, std::uint64_t seed,
                    double tol, const std::string &out) {
  json rep;
  bool ok = true;
  std::mt19937_64 rng(seed);
  for (int m : ms) {
    std::vector<qnoise::GaussianState> states;
    for (int i = 0; i < n_states; ++i) states.push_back(qnoise::random_squeezed_input(m, rng));
    const auto r = qnoise::verify_reduction({m, {kappa, n_b}}, states, tol);
    ok = ok && r.passed;
    rep["results"].push_back({{"M", m},
                              {"states", r.n_states},
                              {"max_deviation", jnum(r.max_deviation)},
                              {"identity_tail_deviation", jnum(r.max_identity_tail_deviation)},
                              {"orthogonality_deviation", jnum(r.orthogonality_deviation)},
                              {"symplectic_deviation", jnum(r.symplectic_deviation)},
                              {"passed", r.passed}});
  }
  rep["kappa"] = kappa;
  rep["n_b"] = n_b;
  rep["tolerance"] = tol;
  rep["passed"] = ok;
  Output o(out);
  o.os() << rep.dump(2) << "\n";
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"qnoise: noise-parameter estimation over bosonic Gaussian channels and haloscope scan rates"};
  app.set_config("--config", "", "TOML config; command-line flags take precedence");
  app.require_subcommand(1);
  int threads = qnoise::default_threads();
  app.add_option("--threads", threads, "worker threads (output order is fixed)")->check(CLI::PositiveNumber);
  std::string out;

  ChannelFlags qf;
  auto *qfi = app.add_subcommand("qfi", "quantum Fisher information about n_B");
  qf.add(qfi);
  qfi->add_option("--out", out, "output file (default stdout)");

  ChannelFlags ff;
  std::string receiver = "homodyne";
  int fi_nmax = 200;
  auto *fi = app.add_subcommand("fi", "classical Fisher information of a receiver");
  ff.add(fi);
  fi->add_option("--receiver", receiver, "homodyne, bell, photon-counting, nulling, direct-pd");
  fi->add_option("--n-max", fi_nmax, "count truncation for distribution-based receivers");
  fi->add_option("--out", out, "output file (default stdout)");

  CavityFlags cf;
  std::vector<std::string> names{"vl", "vac-hom", "sv-qfi", "sv-hom", "tmsv-qfi", "bell", "ub"};
  std::string gain = "10dB", eng = "ideal", omega_grid = "0:5:101", gm_grid, g_grid, method = "auto";
  auto *spec = app.add_subcommand("spectrum", "Fisher information about n_a versus detuning");
  cf.add(spec);
  spec->add_option("--strategy", names, "strategies (repeatable)");
  spec->add_option("--G", gain, "source gain");
  spec->add_option("--engineering", eng, "ideal or practical");
  spec->add_option("--omega-grid", omega_grid, "detuning grid lo:hi:n in units of gamma_l");
  spec->add_option("--out", out, "output file (default stdout)");

  std::vector<std::string> scan_names{"vac-hom"};
  auto *scan = app.add_subcommand("scanrate", "total Fisher information over detuning");
  cf.add(scan);
  scan->add_option("--strategy", scan_names, "strategies (repeatable)");
  scan->add_option("--G", gain, "source gain");
  scan->add_option("--engineering", eng, "ideal or practical");
  scan->add_option("--gm-grid", gm_grid, "coupling-ratio grid lo:hi:n[:log]");
  scan->add_option("--method", method, "auto, closed or quadrature");
  scan->add_option("--out", out, "output file (default stdout)");

  std::vector<std::string> opt_names{"vac-hom"};
  double gm_min = 1e-2, gm_max = 1e6;
  int opt_points = 41;
  auto *optc = app.add_subcommand("optimize", "maximize the total over the coupling ratio");
  cf.add(optc, false);
  optc->add_option("--strategy", opt_names, "strategies (repeatable)");
  optc->add_option("--G", gain, "source gain");
  optc->add_option("--G-grid", g_grid, "gain grid in dB lo:hi:n");
  optc->add_option("--engineering", eng, "ideal or practical");
  optc->add_option("--gm-min", gm_min, "lower end of the coupling-ratio range");
  optc->add_option("--gm-max", gm_max, "upper end of the coupling-ratio range");
  optc->add_option("--points", opt_points, "log-grid points before refinement");
  optc->add_option("--out", out, "output file (default stdout)");

  std::string fig_id;
  double fig_nb = 1e-3;
  int fig_points = 41;
  auto *fig = app.add_subcommand("figure", "plot-ready data for a figure id");
  fig->add_option("id", fig_id, "figure id")->required()->check(CLI::IsMember(qnoise::figure_ids()));
  cf.add(fig, false);
  fig->add_option("--nb", fig_nb, "channel noise for the channel-level figures");
  fig->add_option("--G", gain, "source gain for the fixed-gain figures");
  fig->add_option("--points", fig_points, "grid points per axis");
  fig->add_option("--out", out, "output file (default stdout)");

  int cutoff = 0, tm_cutoff = 0;
  bool two_mode = false;
  auto *orc = app.add_subcommand("oracle-check", "compare closed forms with the number-basis oracle");
  orc->add_option("--cutoff", cutoff, "force the number-basis cutoff");
  orc->add_option("--two-mode-cutoff", tm_cutoff, "two-mode cutoff");
  orc->add_flag("--two-mode", two_mode, "check nulled count distributions instead of the QFI grid");
  orc->add_option("--out", out, "report file (default stdout)");

  std::optional<std::uint64_t> seed;
  std::string model = "geometric", counts_out;
  double s_nb = 0.1, s_kappa = 0.6;
  int samples = 10000, reps = 200, s_nmax = 0;
  auto *smp = app.add_subcommand("sample", "Monte Carlo counts and maximum-likelihood estimates");
  smp->add_option("--seed", seed, "RNG seed (required)");
  smp->add_option("--model", model, "geometric or tmsv-null");
  smp->add_option("--nb", s_nb, "true n_B");
  smp->add_option("--kappa", s_kappa, "channel transmissivity (tmsv-null)");
  smp->add_option("--G", gain, "source gain (tmsv-null)");
  smp->add_option("--samples", samples, "samples per replication");
  smp->add_option("--replications", reps, "independent replications");
  smp->add_option("--n-max", s_nmax, "count truncation of the model");
  smp->add_option("--out", out, "per-replication CSV");
  smp->add_option("--counts-out", counts_out, "histogram CSV of the first replication");

  std::vector<int> ms{2, 3, 5};
  double d_kappa = 0.6, d_nb = 0.1, d_tol = 1e-12;
  int d_states = 20;
  std::uint64_t d_seed = 2026;
  auto *dist = app.add_subcommand("distributed-check", "beamsplitter reduction of correlated noise");
  dist->add_option("--M", ms, "mode counts");
  dist->add_option("--kappa", d_kappa, "per-mode transmissivity");
  dist->add_option("--nb", d_nb, "per-mode correlated noise");
  dist->add_option("--states", d_states, "random squeezed inputs per M");
  dist->add_option("--seed", d_seed, "RNG seed for the test inputs");
  dist->add_option("--tol", d_tol, "pass tolerance");
  dist->add_option("--out", out, "report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 3;
  }

  try {
    if (*qfi) return cmd_qfi(qf, out);
    if (*fi) return cmd_fi(ff, receiver, fi_nmax, out);
    if (*spec) return cmd_spectrum(cf, names, gain, eng, omega_grid, threads, out);
    if (*scan) return cmd_scanrate(cf, scan_names, gain, eng, gm_grid, method, threads, out);
    if (*optc) return cmd_optimize(cf, opt_names, gain, g_grid, eng, gm_min, gm_max, opt_points, threads, out);
    if (*fig) return cmd_figure(fig_id, cf, fig_nb, gain, fig_points, threads, out);
    if (*orc) return cmd_oracle_check(cutoff, tm_cutoff, two_mode, threads, out);
    if (*smp) {
      return cmd_sample(seed, model, s_nb, s_kappa, gain, samples, reps, s_nmax, threads, out, counts_out);
    }
    if (*dist) return cmd_distributed(ms, d_kappa, d_nb, d_states, d_seed, d_tol, out);
  } catch (const DomainError &e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const qnoise::ConvergenceError &e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
