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

#include "qnoise/qfi_closed_form.hpp"

#include <gtest/gtest.h>

#include <random>

namespace qnoise {
namespace {

// Reference values from tests/oracles/derive_reference.py (generic Gaussian QFI at 40 digits).
constexpr double kSvNs1K06 = 12.13940171819852;
constexpr double kSvNs1K1 = 2983.0957922770126;
constexpr double kTmsvNs1K06 = 1427.2942021283214;
constexpr double kTmsvG10K06Nb01 = 14.816414686825054;
constexpr double kSvG10K06Nb01 = 5.1178053463483414;
constexpr double kSvNoisy = 8.8656311110835464;       // G=10, n_t=0.05, kappa=0.6, n_B=0.02
constexpr double kTmsvNoisy001 = 563.2114888612789;   // G=10, n_t=0.01, kappa=0.6, n_B=1e-3
constexpr double kTmsvNoisy01 = 86.109233169087411;   // G=10, n_t=0.1
constexpr double kOverlapCurv[] = {9.0909090909090909, 15.041322314049587, 26.942148760330579};  // N=0,1,3

void ExpectRel(double got, double want, double tol) { EXPECT_NEAR(got / want, 1.0, tol) << got << " vs " << want; }

double PurePhotons(double g) { return (g - 1.0) * (g - 1.0) / (4.0 * g); }

TEST(VacuumLimitTest, Values) {
  EXPECT_DOUBLE_EQ(qfi_vacuum_limit(1.0).value, 0.5);
  ExpectRel(qfi_vacuum_limit(1e-3).value, 999.000999000999, 1e-14);
  EXPECT_THROW(qfi_vacuum_limit(0.0), DomainError);
}

TEST(SqueezedVacuumQfiTest, MatchesGenericFormulaReference) {
  ExpectRel(qfi_sv(1.0, 0.6, 1e-3).value, kSvNs1K06, 1e-12);
  ExpectRel(qfi_sv(1.0, 1.0, 1e-3).value, kSvNs1K1, 1e-12);
  ExpectRel(qfi_sv(PurePhotons(10.0), 0.6, 0.1).value, kSvG10K06Nb01, 1e-12);
}

TEST(SqueezedVacuumQfiTest, AgreesWithGaussianFormula) {
  const SourceSpec src = SourceSpec::from_photons(SourceKind::SqueezedVacuum, 1.0);
  ExpectRel(qfi_gaussian_source(src, 1.0, 1e-3).value, qfi_sv(1.0, 1.0, 1e-3).value, 1e-8);
}

TEST(SqueezedVacuumQfiTest, ZeroPhotonsIsVacuumLimit) {
  for (double k : {0.2, 0.6, 1.0}) EXPECT_NEAR(qfi_sv(0.0, k, 0.05).value / qfi_vacuum_limit(0.05).value, 1.0, 1e-13);
}

TEST(SqueezedVacuumQfiTest, LargePhotonLimitIsFinite) {
  const double k = 0.6, nb = 1e-3;
  ExpectRel(qfi_sv(1e6, k, nb).value, 2.0 / ((1.0 - k + 2.0 * nb) * (1.0 - k + 2.0 * nb)), 1e-3);
}

TEST(TmsvQfiTest, MatchesGenericFormulaReference) {
  ExpectRel(qfi_tmsv(1.0, 0.6, 1e-3).value, kTmsvNs1K06, 1e-12);
  ExpectRel(qfi_tmsv(PurePhotons(10.0), 0.6, 0.1).value, kTmsvG10K06Nb01, 1e-12);
}

TEST(TmsvQfiTest, AgreesWithGaussianFormula) {
  const SourceSpec src = SourceSpec::from_photons(SourceKind::Tmsv, 1.0);
  ExpectRel(qfi_gaussian_source(src, 0.6, 1e-3).value, qfi_tmsv(1.0, 0.6, 1e-3).value, 1e-8);
}

TEST(TmsvQfiTest, RatioIdentityOnRandomGrid) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double ns = std::pow(10.0, -3.0 + 5.0 * u(rng)), k = 2.0 * u(rng);
    const double nb = std::max(0.0, k - 1.0) + std::pow(10.0, -4.0 + 4.0 * u(rng));
    const double ratio = qfi_tmsv(ns, k, nb).value / qfi_vacuum_limit(nb).value;
    EXPECT_NEAR(ratio / tmsv_vl_ratio(ns, k, nb), 1.0, 1e-12);
    EXPECT_GE(ratio, 1.0 - 1e-14);
  }
}

TEST(NoisySourceQfiTest, MatchesGenericFormulaReference) {
  ExpectRel(qfi_gaussian_source(SourceSpec{SourceKind::SqueezedVacuum, 10.0, 0.05}, 0.6, 0.02).value, kSvNoisy, 1e-9);
  ExpectRel(qfi_gaussian_source(SourceSpec{SourceKind::Tmsv, 10.0, 0.01}, 0.6, 1e-3).value, kTmsvNoisy001, 1e-9);
  ExpectRel(qfi_gaussian_source(SourceSpec{SourceKind::Tmsv, 10.0, 0.1}, 0.6, 1e-3).value, kTmsvNoisy01, 1e-9);
}

TEST(NoisySourceQfiTest, NoiselessSourceMatchesClosedForm) {
  for (double g : {2.0, 10.0}) {
    ExpectRel(qfi_gaussian_source(SourceSpec{SourceKind::SqueezedVacuum, g, 0.0}, 0.6, 0.1).value,
              qfi_sv(PurePhotons(g), 0.6, 0.1).value, 1e-9);
  }
}

TEST(NoisySourceQfiTest, DecreasesWithSourceNoise) {
  double prev = qfi_gaussian_source(SourceSpec{SourceKind::Tmsv, 10.0, 0.0}, 0.6, 1e-3).value;
  for (double nt : {1e-3, 1e-2, 0.1, 1.0}) {
    const double j = qfi_gaussian_source(SourceSpec{SourceKind::Tmsv, 10.0, nt}, 0.6, 1e-3).value;
    EXPECT_LT(j, prev);
    prev = j;
  }
}

TEST(UpperBoundTest, ZeroPhotonsIsVacuumLimit) {
  for (double nb : {1e-4, 0.1, 3.0}) EXPECT_NEAR(ub_ue(0.0, 0.7, nb).value / qfi_vacuum_limit(nb).value, 1.0, 1e-14);
}

TEST(UpperBoundTest, OverlapCurvatureReference) {
  const int ns[] = {0, 1, 3};
  for (int i = 0; i < 3; ++i) ExpectRel(ub_ue(ns[i], 0.6, 0.1).value, kOverlapCurv[i], 1e-12);
}

TEST(UpperBoundTest, OverlapCurvatureNumeric) {
  // -4 d^2/dn'^2 of the overlap with all photons on one level, Richardson-extrapolated.
  const double nb = 0.1, k = 0.6;
  for (int n : {1, 3}) {
    std::vector<double> p(n + 1, 0.0);
    p[n] = 1.0;
    auto f = [&](double x) { return overlap_bound(nb, x, k, p, 1); };
    auto d2 = [&](double h) { return (f(nb + h) - 2.0 * f(nb) + f(nb - h)) / (h * h); };
    const double h = 1e-3;
    const double curv = -4.0 * (4.0 * d2(h / 2.0) - d2(h)) / 3.0;
    ExpectRel(curv, ub_ue(n, k, nb).value, 1e-5);
  }
}

TEST(UpperBoundTest, OverlapIsOneOnDiagonal) {
  EXPECT_NEAR(overlap_bound(0.3, 0.3, 0.6, {0.0, 1.0}, 1), 1.0, 1e-14);
  EXPECT_NEAR(overlap_bound(0.3, 0.3, 0.6, {0.5, 0.25, 0.25}, 4), 1.0, 1e-14);
}

TEST(UpperBoundTest, CombinedTakesMinimum) {
  const double ue = ub_ue(1.0, 0.6, 1e-3).value, tp = ub_tp(0.6, 1e-3).value;
  const FisherResult c = ub_combined(1.0, 0.6, 1e-3);
  EXPECT_DOUBLE_EQ(c.value, std::min(ue, tp));
  EXPECT_EQ(c.note, ue < tp ? "unitary-extension branch" : "teleportation branch");
  EXPECT_DOUBLE_EQ(ub_bound(BoundBranch::Teleportation, 1.0, 0.6, 1e-3).value, tp);
}

TEST(UpperBoundTest, BoundsEveryProbe) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double ns = std::pow(10.0, -3.0 + 4.0 * u(rng)), k = 2.0 * u(rng);
    const double nb = std::max(0.0, k - 1.0) + std::pow(10.0, -4.0 + 3.0 * u(rng));
    const double ub = ub_combined(ns, k, nb).value;
    EXPECT_LE(qfi_tmsv(ns, k, nb).value, ub * (1.0 + 1e-12));
    EXPECT_LE(qfi_sv(ns, k, nb).value, ub * (1.0 + 1e-12));
  }
}

TEST(UpperBoundTest, CompoundSingleElementIsUnitaryExtension) {
  CompoundChannelSpec spec;
  spec.theta = 0.2;
  spec.elements.push_back({0.6, [](double t) { return t; }, 1.0, {}});
  ExpectRel(ub_compound(spec).value, ub_ue(1.0, 0.6, 0.2).value, 1e-8);
  spec.elements.push_back({0.6, [](double t) { return 2.0 * t; }, 1.0, [](double) { return 2.0; }});
  ExpectRel(ub_compound(spec).value, ub_ue(1.0, 0.6, 0.2).value + 4.0 * ub_ue(1.0, 0.6, 0.4).value, 1e-8);
}

TEST(DomainTest, UnphysicalPointsThrow) {
  EXPECT_THROW(qfi_sv(1.0, 2.0, 0.5), DomainError);
  EXPECT_THROW(qfi_tmsv(-1.0, 0.5, 0.5), DomainError);
  EXPECT_THROW(ub_ue(1.0, 0.5, 0.0), DomainError);
}

}  // namespace
}  // namespace qnoise
