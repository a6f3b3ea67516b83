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

#include "qnoise/measurements.hpp"

#include <gtest/gtest.h>

#include "qnoise/qfi_closed_form.hpp"

namespace qnoise {
namespace {

// Generating-function reference at kappa = 0.6, n_B = 1e-3, G = 10 (tests/oracles/derive_reference.py).
constexpr double kSvNull[] = {0.65873908784631758, 0.13990452969831865, 0.09110919219333192};
constexpr double kSvNullP5 = 0.01528100204976678;
struct JointRef {
  int nr, na;
  double p;
};
constexpr JointRef kTmsvNull[] = {{0, 0, 0.55136023387421722},
                                  {1, 0, 0.0009195942751809403},
                                  {0, 1, 0.24685406324092663},
                                  {1, 1, 0.00041190722022811732},
                                  {2, 3, 1.380258234553029e-7}};

double Db(double db) { return std::pow(10.0, db / 10.0); }
double PurePhotons(double g) { return (g - 1.0) * (g - 1.0) / (4.0 * g); }

TEST(HomodyneTest, VacuumValues) {
  EXPECT_DOUBLE_EQ(fi_homodyne_vacuum(0.0).value, 2.0);
  EXPECT_NEAR(fi_homodyne_vacuum(0.0, 0.1).value, 2.0 / 1.44, 1e-15);
  const double r = fi_homodyne_vacuum(1e-3).value / qfi_vacuum_limit(1e-3).value;
  EXPECT_NEAR(r / 2e-3, 1.0, 5e-3);
}

TEST(HomodyneTest, SqueezedVacuum) {
  EXPECT_DOUBLE_EQ(fi_homodyne_sv(1.0, 0.6, 0.1).value, fi_homodyne_vacuum(0.1).value);
  const double k = 0.6, nb = 1e-3, a = 2.0 * nb + 1.0 - k;
  EXPECT_NEAR(fi_homodyne_sv(1e8, k, nb).value / (2.0 / (a * a)), 1.0, 1e-6);
  EXPECT_GE(fi_homodyne_sv(10.0, 1.0, 1e-3).value, fi_homodyne_vacuum(1e-3).value);
}

TEST(BellTest, Values) {
  EXPECT_NEAR(fi_bell(1.0, 1.0, 0.1).value, 1.0 / 1.21, 1e-15);
  // Small-noise limit of the ratio to SV homodyne at unit transmissivity.
  EXPECT_NEAR(fi_bell(10.0, 1.0, 1e-9).value / fi_homodyne_sv(10.0, 1.0, 1e-9).value, 0.5, 1e-6);
}

TEST(BellTest, InteriorMaximumBelowUnitTransmissivity) {
  std::vector<double> v;
  for (double db = 0.0; db <= 40.0; db += 0.5) v.push_back(fi_bell(Db(db), 0.6, 1e-3).value);
  const auto it = std::max_element(v.begin(), v.end());
  EXPECT_NE(it, v.begin());
  EXPECT_NE(it, v.end() - 1);
  EXPECT_GT(*it, 2.0 * v.back());
}

TEST(PhotonCountingTest, MatchesVacuumLimitAndDistributionSum) {
  for (double nb : {1e-3, 0.1, 2.0}) {
    EXPECT_DOUBLE_EQ(fi_photon_counting_vacuum(nb).value, qfi_vacuum_limit(nb).value);
    const auto fam = [](double x) { return geometric_distribution(x, 2000); };
    EXPECT_NEAR(fi_from_distribution(fam, nb).value / qfi_vacuum_limit(nb).value, 1.0, 1e-8);
  }
}

TEST(NulledSvTest, MatchesGeneratingFunction) {
  const CountDistribution d = nulled_sv_distribution(10.0, 0.6, 1e-3, 400);
  for (int n = 0; n < 3; ++n) EXPECT_NEAR(d.prob(n) / kSvNull[n], 1.0, 1e-12);
  EXPECT_NEAR(d.prob(5) / kSvNullP5, 1.0, 1e-12);
  EXPECT_NEAR(d.total(), 1.0, 1e-9);
}

TEST(NulledSvTest, ChannelParametersMatchGaussianPipeline) {
  const SourceSpec src{SourceKind::SqueezedVacuum, 10.0, 0.0};
  const CountDistribution a = nulled_sv_family(src, 0.6, 100)(1e-3);
  const CountDistribution b = nulled_sv_distribution(10.0, 0.6, 1e-3, 100);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.probs[i], b.probs[i], 1e-13);
}

TEST(NulledSvTest, ParametersNeedNotSatisfyAGreaterThanB) {
  const NulledSvParams p = NulledSvParams::from_channel(10.0, 0.6, 1e-3);
  EXPECT_LT(p.A, p.B);
  EXPECT_NO_THROW(p.validate());
}

TEST(NulledSvTest, AchievesQfiAtUnitTransmissivity) {
  for (double db : {3.0, 10.0}) {
    const SourceSpec src{SourceKind::SqueezedVacuum, Db(db), 0.0};
    const double fi = fi_from_distribution(nulled_sv_family(src, 1.0, 300), 1e-3).value;
    EXPECT_NEAR(fi / qfi_sv(src.pure_photons(), 1.0, 1e-3).value, 1.0, 0.05);
  }
}

TEST(NulledTmsvTest, MatchesGeneratingFunction) {
  const CountDistribution d = nulled_tmsv_distribution(PurePhotons(10.0), 0.6, 1e-3, 120);
  for (const auto &r : kTmsvNull) EXPECT_NEAR(d.prob(r.nr, r.na) / r.p, 1.0, 1e-11) << r.nr << "," << r.na;
  EXPECT_NEAR(d.total(), 1.0, 1e-9);
}

TEST(NulledTmsvTest, SeriesFormAgrees) {
  const NulledTmsvParams prm = NulledTmsvParams::from_channel(PurePhotons(10.0), 0.6, 1e-3);
  ASSERT_LT(prm.z(), 1.0);
  const CountDistribution a = nulled_tmsv_distribution(prm, 30), b = nulled_tmsv_distribution_series(prm, 30);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.probs[i], b.probs[i], 1e-12);
}

TEST(NulledTmsvTest, TerminatingFormFiniteAtUnitRatio) {
  // kappa = 1 puts z at 1, where the series form stops converging.
  const NulledTmsvParams prm = NulledTmsvParams::from_channel(2.0, 1.0, 1e-3);
  const CountDistribution d = nulled_tmsv_distribution(prm, 80);
  EXPECT_NEAR(d.total(), 1.0, 1e-9);
  EXPECT_THROW(nulled_tmsv_distribution_series(prm, 10), DomainError);
}

TEST(NulledTmsvTest, ChannelParametersMatchGaussianPipeline) {
  const SourceSpec src{SourceKind::Tmsv, 10.0, 0.0};
  const CountDistribution a = nulled_tmsv_family(src, 0.6, 40)(1e-3);
  const CountDistribution b = nulled_tmsv_distribution(src.pure_photons(), 0.6, 1e-3, 40);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.probs[i], b.probs[i], 1e-12);
}

TEST(NulledTmsvTest, WithinFivePercentOfLowNoiseQfi) {
  const double k = 0.6, nb = 1e-3;
  for (double db : {3.0, 10.0}) {
    const SourceSpec src{SourceKind::Tmsv, Db(db), 0.0};
    const double ns = src.pure_photons();
    const double fi = fi_from_distribution(nulled_tmsv_family(src, k, 60), nb).value;
    EXPECT_NEAR(fi / ((1.0 + ns) / ((1.0 + ns * (1.0 - k)) * nb)), 1.0, 0.05);
  }
}

TEST(DirectDetectionTest, NullingWinsAndGapGrows) {
  const double k = 0.6, nb = 1e-3;
  double prev = 0.0;
  for (double ns : {0.1, 1.0, 5.0}) {
    const SourceSpec src = SourceSpec::from_photons(SourceKind::Tmsv, ns);
    const double nulled = fi_from_distribution(nulled_tmsv_family(src, k, 100), nb).value;
    const double direct = fi_direct_pd_tmsv(ns, k, nb, 100).value;
    EXPECT_GE(nulled / direct, 1.0);
    EXPECT_GT(nulled / direct, prev);
    prev = nulled / direct;
  }
}

TEST(DirectDetectionTest, NegligibleGapNearUnitTransmissivity) {
  const double ns = 0.01, nb = 1e-3;
  const SourceSpec src = SourceSpec::from_photons(SourceKind::Tmsv, ns);
  const double nulled = fi_from_distribution(nulled_tmsv_family(src, 0.999, 40), nb).value;
  const double direct = fi_direct_pd_tmsv(ns, 0.999, nb, 40).value;
  EXPECT_NEAR(nulled / direct, 1.0, 0.05);
}

TEST(DistributionFiTest, FlagsUnconvergedSupport) {
  const auto fam = [](double x) { return geometric_distribution(x, 5); };
  EXPECT_TRUE(fi_from_distribution(fam, 2.0).flagged);
  EXPECT_THROW(fi_from_distribution(fam, 0.0), DomainError);
}

TEST(SamplingTest, PointMassGivesZeros) {
  const auto s = sample_counts(CountDistribution::single({1.0}), 1000, 3);
  EXPECT_TRUE(std::all_of(s.begin(), s.end(), [](std::int64_t v) { return v == 0; }));
}

TEST(SamplingTest, GeometricMeanWithinFiveSigma) {
  const double nb = 0.1;
  const auto s = sample_counts(geometric_distribution(nb, 200), 100000, 42);
  double m = 0.0;
  for (auto v : s) m += static_cast<double>(v);
  m /= s.size();
  EXPECT_NEAR(m, nb, 5.0 * std::sqrt(nb * (1.0 + nb) / s.size()));
}

TEST(SamplingTest, FixedSeedIsBitIdentical) {
  const CountDistribution d = nulled_tmsv_distribution(1.0, 0.6, 1e-3, 30);
  EXPECT_EQ(sample_counts(d, 5000, 99), sample_counts(d, 5000, 99));
  EXPECT_NE(sample_counts(d, 5000, 99), sample_counts(d, 5000, 100));
}

TEST(MleTest, GeometricWithinCramerRaoBand) {
  const double nb = 0.1;
  const auto fam = [](double x) { return geometric_distribution(x, 400); };
  const auto s = sample_counts(fam(nb), 100000, 2026);
  const MleResult r = mle_estimate(s, fam, 1e-4, 10.0);
  EXPECT_FALSE(r.at_boundary);
  EXPECT_NEAR(r.estimate, nb, 3.0 * std::sqrt(1.0 / (1e5 * qfi_vacuum_limit(nb).value)));
}

TEST(MleTest, AllZeroSamplesHitBoundary) {
  const auto fam = [](double x) { return geometric_distribution(x, 50); };
  const std::vector<std::int64_t> zeros(1000, 0);
  const MleResult r = mle_estimate(zeros, fam, 1e-6, 1.0);
  EXPECT_TRUE(r.at_boundary);
  EXPECT_NEAR(r.estimate, 1e-6, 1e-6);
}

}  // namespace
}  // namespace qnoise
