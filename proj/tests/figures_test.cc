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

#include "qnoise/figures.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>

#include "qnoise/parallel.hpp"

namespace qnoise {
namespace {

int Column(const Table &t, const std::string &name) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), name);
  return it == t.columns.end() ? -1 : static_cast<int>(it - t.columns.begin());
}

TEST(ParallelTest, ResultsInIndexOrder) {
  for (int threads : {1, 3, 8}) {
    const auto v = parallel_map(100, threads, [](std::size_t i) { return static_cast<int>(i * i); });
    ASSERT_EQ(v.size(), 100u);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], static_cast<int>(i * i));
  }
}

TEST(ParallelTest, LowestIndexExceptionWins) {
  std::atomic<int> calls{0};
  try {
    parallel_map(50, 4, [&](std::size_t i) {
      ++calls;
      if (i == 7 || i == 30) throw std::runtime_error("fail " + std::to_string(i));
      return 0;
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error &e) {
    EXPECT_STREQ(e.what(), "fail 7");
  }
  EXPECT_GT(calls.load(), 0);
}

TEST(ParallelTest, EmptyRange) { EXPECT_TRUE(parallel_map(0, 4, [](std::size_t) { return 1; }).empty()); }

class FigureShapeTest : public ::testing::TestWithParam<std::string> {};

TEST_P(FigureShapeTest, RectangularAndFinite) {
  FigureOptions o;
  o.points = 3;
  const Table t = figure_data(GetParam(), o);
  EXPECT_EQ(t.title, GetParam());
  ASSERT_FALSE(t.rows.empty());
  for (const auto &r : t.rows) {
    ASSERT_EQ(r.size(), t.columns.size());
    for (double x : r) EXPECT_TRUE(std::isfinite(x));
  }
}

INSTANTIATE_TEST_SUITE_P(AllIds, FigureShapeTest, ::testing::ValuesIn(figure_ids()),
                         [](const auto &info) { return "fig" + info.param; });

TEST(FigureTest, UnknownIdThrows) { EXPECT_THROW(figure_data("12"), DomainError); }

TEST(FigureTest, SourceMapBelowUltimateLimit) {
  FigureOptions o;
  o.points = 9;
  const Table t = figure_data("3a", o);
  const int c = Column(t, "tmsv_over_ub");
  for (const auto &r : t.rows) EXPECT_LE(r[c], 1.0 + 1e-12);
}

TEST(FigureTest, VacuumHomodynePinnedAtZeroDb) {
  FigureOptions o;
  o.points = 4;
  const Table t = figure_data("5b", o);
  const int c = Column(t, "vac-hom");
  for (const auto &r : t.rows) EXPECT_NEAR(r[c], 0.0, 1e-6);
}

TEST(FigureTest, ZeroGainCurvesMeetVacuumCounterparts) {
  FigureOptions o;
  o.points = 3;
  const Table t = figure_data("4a", o);
  const auto &r = t.rows.front();
  ASSERT_EQ(r[0], 0.0);
  EXPECT_NEAR(r[Column(t, "sv_qfi")], r[Column(t, "vl")], 1e-9);
  EXPECT_NEAR(r[Column(t, "tmsv_qfi")], r[Column(t, "vl")], 1e-9);
  EXPECT_NEAR(r[Column(t, "ub")], r[Column(t, "vl")], 1e-9);
  EXPECT_NEAR(r[Column(t, "sv_hom")], 0.0, 1e-12);
}

TEST(FigureTest, ThreadCountDoesNotChangeOutput) {
  FigureOptions a, b;
  a.points = b.points = 5;
  b.threads = 3;
  EXPECT_EQ(figure_data("4b", a).rows, figure_data("4b", b).rows);
  EXPECT_EQ(figure_data("8a", a).rows, figure_data("8a", b).rows);
}

}  // namespace
}  // namespace qnoise
