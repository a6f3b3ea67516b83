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

#include "qnoise/haloscope.hpp"

#include <gtest/gtest.h>

namespace qnoise {
namespace {

// mpmath spectra and totals at gamma_l = 1, gm = 3, gamma_a = 1e-12, n_T = 0.1, G = 10
// (tests/oracles/derive_reference.py).
struct SpectrumRef {
  const char *strategy;
  Engineering eng;
  double omega, value;
};
constexpr SpectrumRef kSpectra[] = {
    {"sv-qfi", Engineering::Practical, 0.0, 1.672895655817392e-24},
    {"sv-qfi", Engineering::Practical, 0.7, 1.50241751830998e-24},
    {"tmsv-qfi", Engineering::Practical, 0.0, 7.5392827849753446e-24},
    {"tmsv-qfi", Engineering::Practical, 0.7, 6.9222001026033178e-24},
    {"tmsv-qfi", Engineering::Ideal, 0.0, 8.3065338457918268e-24},
    {"tmsv-qfi", Engineering::Ideal, 0.7, 7.9695966285370259e-24},
};
struct TotalRef {
  const char *strategy;
  Engineering eng;
  double value;
};
constexpr TotalRef kTotals[] = {
    {"ub-ue", Engineering::Practical, 1.227581304605316e-22},
    {"ub-ue", Engineering::Ideal, 1.0732712386139829e-22},
    {"vac-hom", Engineering::Practical, 2.454369260616994e-24},
    {"vac-hom", Engineering::Ideal, 2.8658643798961258e-24},
    {"sv-hom", Engineering::Ideal, 1.2562896910770295e-23},
    {"sv-hom", Engineering::Practical, 1.1375941479699436e-23},
    {"tmsv-qfi", Engineering::Ideal, 8.8840589095584819e-23},
};

CavityParams RefCavity() { return CavityParams::with_occupation(3.0, 1e-12, 0.1); }
CavityParams Fig6Cavity(double gm) { return CavityParams::physical(gm, 1e-12, 0.061, 2.0 * kPi * 10e9); }
double Db(double db) { return std::pow(10.0, db / 10.0); }

TEST(CavityTest, ThermalOccupation) {
  const double x = kHbar * 2.0 * kPi * 10e9 / (kBoltzmann * 0.061);
  EXPECT_NEAR(thermal_occupation(2.0 * kPi * 10e9, 0.061), 1.0 / (std::exp(x) - 1.0), 1e-18);
  const CavityParams c = CavityParams::with_occupation(2.0, 1e-12, 1e-6);
  EXPECT_NEAR(thermal_occupation(c.omega_c, c.temp) / 1e-6, 1.0, 1e-10);
  EXPECT_THROW(CavityParams::with_occupation(2.0, 1e-12, 0.0), DomainError);
}

TEST(CavityTest, Susceptibilities) {
  const CavityParams c = CavityParams::with_occupation(1.0, 1e-12, 0.1);
  EXPECT_NEAR(susceptibilities(0.0, c).chi_mm2, 0.0, 1e-15);
  for (double w : {0.0, 0.3, 5.0, 1e6}) {
    const Susceptibilities s = susceptibilities(w, RefCavity());
    EXPECT_NEAR(s.chi_mm2 + s.one_minus_chi_mm2, 1.0, 1e-15);
    EXPECT_GT(s.one_minus_chi_mm2, 0.0);
  }
}

TEST(StrategyTest, NamesRoundTrip) {
  for (const auto &n : strategy_names()) EXPECT_EQ(parse_strategy(n, 10.0, Engineering::Ideal).name(), n);
  EXPECT_THROW(parse_strategy("nope", 10.0, Engineering::Ideal), DomainError);
  StrategySpec bad{SourceKind::Vacuum, 1.0, Receiver::Bell};
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(SpectrumTest, MatchesReference) {
  for (const auto &r : kSpectra) {
    const double v = fisher_spectrum(parse_strategy(r.strategy, 10.0, r.eng), RefCavity(), r.omega).value;
    EXPECT_NEAR(v / r.value, 1.0, 1e-9) << r.strategy << " " << to_string(r.eng) << " " << r.omega;
  }
}

TEST(SpectrumTest, PracticalVacuumHomodyne) {
  const CavityParams c = Fig6Cavity(2.0);
  for (double w : {0.0, 0.4, 3.0}) {
    const Susceptibilities s = susceptibilities(w, c);
    const double want = s.chi_ma2 * s.chi_ma2 * 2.0 / ((1.0 + 2.0 * c.n_t) * (1.0 + 2.0 * c.n_t));
    EXPECT_NEAR(fisher_spectrum(parse_strategy("vac-hom", 1.0, Engineering::Practical), c, w).value / want, 1.0, 1e-14);
  }
}

TEST(SpectrumTest, VisibilityFormOfSqueezedHomodyne) {
  const CavityParams c = Fig6Cavity(20.0);
  const StrategySpec st = parse_strategy("sv-hom", 10.0, Engineering::Practical);
  for (double w : {0.0, 0.5, 2.0, 30.0}) {
    EXPECT_NEAR(sv_homodyne_visibility_spectrum(c, 10.0, w) / fisher_spectrum(st, c, w).value, 1.0, 1e-10);
  }
}

TEST(SpectrumTest, SqueezedQfiBelowVacuumLimitNearResonance) {
  const CavityParams c = Fig6Cavity(1.0);
  const double sv = fisher_spectrum(parse_strategy("sv-qfi", 10.0, Engineering::Practical), c, 0.1).value;
  const double vl = fisher_spectrum(parse_strategy("vl", 1.0, Engineering::Practical), c, 0.1).value;
  EXPECT_LT(sv, vl);
}

class OrderingTest : public ::testing::TestWithParam<Engineering> {};

TEST_P(OrderingTest, StrategiesRespectBounds) {
  const Engineering eng = GetParam();
  const double g = Db(10.0);
  const CavityParams c = Fig6Cavity(3.0);
  auto f = [&](const char *n, double w) { return fisher_spectrum(parse_strategy(n, g, eng), c, w).value; };
  for (double w : {0.0, 0.5, 1.5, 4.0}) {
    const double ub = f("ub", w), tq = f("tmsv-qfi", w), sq = f("sv-qfi", w);
    EXPECT_LE(tq, ub * (1.0 + 1e-9)) << w;
    EXPECT_LE(sq, ub * (1.0 + 1e-9)) << w;
    EXPECT_LE(f("bell", w), tq * (1.0 + 1e-9)) << w;
    EXPECT_LE(f("sv-hom", w), sq * (1.0 + 1e-9)) << w;
    EXPECT_LE(f("vac-hom", w), f("vl", w)) << w;
    EXPECT_DOUBLE_EQ(f("vac-pc", w), f("vl", w));
    const double tn = f("tmsv-null", w), sn = f("sv-null", w);
    EXPECT_LE(tn, tq * (1.0 + 1e-6)) << w;
    EXPECT_GE(tn, 0.95 * tq) << w;
    EXPECT_LE(sn, sq * (1.0 + 1e-6)) << w;
    EXPECT_GE(sn, 0.75 * sq) << w;
  }
}

INSTANTIATE_TEST_SUITE_P(Engineering, OrderingTest, ::testing::Values(Engineering::Ideal, Engineering::Practical),
                         [](const auto &info) { return to_string(info.param); });

TEST(TotalTest, ClosedFormsMatchReference) {
  for (const auto &r : kTotals) {
    const ScanRateResult t = total_fisher_closed(parse_strategy(r.strategy, 10.0, r.eng), RefCavity());
    EXPECT_EQ(t.method, FisherMethod::ClosedForm) << r.strategy;
    EXPECT_NEAR(t.total / r.value, 1.0, 1e-9) << r.strategy << " " << to_string(r.eng);
  }
}

TEST(TotalTest, QuadratureMatchesReference) {
  for (const auto &r : kTotals) {
    const ScanRateResult t = total_fisher_quadrature(parse_strategy(r.strategy, 10.0, r.eng), RefCavity());
    EXPECT_NEAR(t.total / r.value, 1.0, 1e-7) << r.strategy << " " << to_string(r.eng);
  }
}

TEST(TotalTest, PracticalVacuumHomodyneLaw) {
  for (double gm : {0.5, 2.0, 40.0}) {
    const CavityParams c = Fig6Cavity(gm);
    const double nu = 2.0 * c.n_t + 1.0;
    const double want = 4.0 * kPi * c.gamma_l * 2.0 * c.ga_tilde() * c.ga_tilde() / (nu * nu) * gm * gm /
                        std::pow(gm + 1.0, 3.0);
    const double got = total_fisher_closed(parse_strategy("vac-hom", 1.0, Engineering::Practical), c).total;
    EXPECT_NEAR(got / want, 1.0, 1e-6);
  }
}

TEST(TotalTest, MissingClosedFormFallsBackToQuadrature) {
  const ScanRateResult r = total_fisher_closed(parse_strategy("sv-qfi", 10.0, Engineering::Practical), RefCavity());
  EXPECT_EQ(r.method, FisherMethod::Quadrature);
  EXPECT_NE(r.note.find("quadrature"), std::string::npos);
}

TEST(TotalTest, TeleportationBranchDiverges) {
  EXPECT_THROW(total_fisher_quadrature(parse_strategy("ub-tp", 10.0, Engineering::Ideal), RefCavity()), DomainError);
}

TEST(TotalTest, CompoundRiemannSumConvergesToTotal) {
  // Detuning bins as compound channel elements: dn_B/dn_a = chi_ma^2 sqrt(d omega).
  const CavityParams c = CavityParams::with_occupation(3.0, 1e-12, 0.1);
  const double ns = SourceSpec{SourceKind::Tmsv, 10.0, 0.0}.pure_photons();
  const double scale = 0.5 * (c.gamma_m + c.gamma_l);
  const int bins = 4000;
  CompoundChannelSpec spec;
  for (int i = 0; i < bins; ++i) {
    const double u = -0.5 * kPi + kPi * (i + 0.5) / bins;
    const double w = scale * std::tan(u), dw = scale * kPi / bins / (std::cos(u) * std::cos(u));
    const Susceptibilities s = susceptibilities(w, c);
    const double nb = s.one_minus_chi_mm2 * c.n_t, slope = s.chi_ma2 * std::sqrt(dw);
    spec.elements.push_back({s.chi_mm2, [nb, slope](double t) { return nb + slope * t; }, ns,
                             [slope](double) { return slope; }});
  }
  const double sum = ub_compound(spec).value;
  const double total = total_fisher_closed(parse_strategy("ub-ue", 10.0, Engineering::Ideal), c).total;
  EXPECT_NEAR(sum / total, 1.0, 1e-4);
}

TEST(OptimizeTest, VacuumHomodyneOptimumAtTwo) {
  const CavityParams c = CavityParams::with_occupation(1.0, 1e-12, 1e-6);
  const ScanRateResult r = optimize_coupling(parse_strategy("vac-hom", 1.0, Engineering::Ideal), c, 1e-2, 1e3);
  EXPECT_NEAR(r.optimum_coupling, 2.0, 2e-2);
  EXPECT_NEAR(r.total / (2.0 * kPi * 1e-24 * 16.0 / 27.0), 1.0, 1e-3);
  EXPECT_FALSE(r.at_boundary);
}

TEST(OptimizeTest, PracticalSqueezedHomodyneNearTwiceGain) {
  const ScanRateResult r =
      optimize_coupling(parse_strategy("sv-hom", Db(10.0), Engineering::Practical), Fig6Cavity(1.0), 1e-2, 1e4);
  EXPECT_NEAR(10.0 * std::log10(r.optimum_coupling), 13.0, 1.5);
}

TEST(OptimizeTest, PracticalTmsvNearHalfGain) {
  const double g = Db(20.0);
  const ScanRateResult r =
      optimize_coupling(parse_strategy("tmsv-qfi", g, Engineering::Practical), Fig6Cavity(1.0), 1e-2, 1e4);
  EXPECT_NEAR(r.optimum_coupling / (g / 2.0), 1.0, 0.1);
  const double asym = *total_fisher_asymptote(parse_strategy("tmsv-qfi", g, Engineering::Practical), Fig6Cavity(1.0));
  EXPECT_NEAR(r.total / asym, 1.0, 0.05);
}

TEST(OptimizeTest, BoundaryOptimumReportsEndpoint) {
  const ScanRateResult r =
      optimize_coupling(parse_strategy("ub-ue", Db(10.0), Engineering::Ideal), Fig6Cavity(1.0), 1e-2, 1e6);
  EXPECT_TRUE(r.at_boundary);
  EXPECT_EQ(r.optimum_coupling, 1e6);
}

}  // namespace
}  // namespace qnoise
