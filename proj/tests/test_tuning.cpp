// Copyright 2026 The dptune Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "dptune/tuning.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "dptune/subsampling.hpp"

namespace dptune {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDelta = 1e-5;

// The reference base mechanism: DP-SGD with gamma=0.01, sigma=2.0 run
// for 50 epochs (T = 5000), on integer orders 2..64.
RdpCurve ReferenceBase() {
  return MechanismSpec::Composed(MechanismSpec::SubsampledGaussian(2.0, 0.01), 5000)
      .Curve(AlphaGrid::Integers(2, 64));
}

// Random finite RDP curve, non-decreasing in alpha as real curves are.
RdpCurve RandomCurve(std::mt19937& rng, const AlphaGrid& grid, double max_step = 0.3) {
  std::uniform_real_distribution<double> u(0.0, max_step);
  std::vector<double> eps;
  double acc = u(rng);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    acc += u(rng);
    eps.push_back(acc);
  }
  return RdpCurve(grid, std::move(eps));
}

TEST(TuningRdpTest, MuOneKillsLogTerm) {
  RdpCurve base = ReferenceBase();
  RdpCurve out = TuningRdp(base, 1.0);
  for (std::size_t i = 0; i < base.grid().size(); ++i) {
    double a = base.grid().orders()[i];
    double eps_hat = std::log1p(1.0 / (a - 1.0));
    double delta_hat = RdpToDelta(base, eps_hat).delta;
    EXPECT_NEAR(out.eps()[i], base.eps()[i] + delta_hat, 1e-12);
  }
}

TEST(TuningRdpTest, ZeroBaseCurveGivesPureLogTerm) {
  // A zero curve converts to delta_hat = 0 exactly (identical
  // distributions), so with mu = e the whole bound is 1/(alpha-1).
  RdpCurve zero = RdpCurve::Zero(AlphaGrid::Integers(2, 64));
  RdpCurve out = TuningRdp(zero, std::exp(1.0));
  for (std::size_t i = 0; i < zero.grid().size(); ++i) {
    double a = zero.grid().orders()[i];
    EXPECT_NEAR(out.eps()[i], 1.0 / (a - 1.0), 1e-14);
  }
}

// Frozen regression: the reference baseline at mu=15 converts to this value,
// recorded from an independent high-precision implementation of the same
// pipeline and confirmed by re-running on an extended integer grid 2..256
// (the minimizing order, 9, is interior so the grid does not bind).
TEST(TuningRdpTest, ReferenceBaselineRegression) {
  const double kBaselineMu15 = 5.003904364046125;
  const double kBaselineMu45 = 9.804585741960956;
  RdpCurve base = ReferenceBase();
  EpsilonBound b15 = RdpToDp(TuningRdp(base, 15.0), kDelta);
  EXPECT_NEAR(b15.epsilon, kBaselineMu15, 1e-10);
  EXPECT_DOUBLE_EQ(b15.order, 9.0);
  EXPECT_NEAR(RdpToDp(TuningRdp(base, 45.0), kDelta).epsilon, kBaselineMu45, 1e-10);

  RdpCurve base_ext =
      MechanismSpec::Composed(MechanismSpec::SubsampledGaussian(2.0, 0.01), 5000)
          .Curve(AlphaGrid::Integers(2, 256));
  EXPECT_NEAR(RdpToDp(TuningRdp(base_ext, 15.0), kDelta).epsilon, kBaselineMu15, 1e-10);
}

TEST(TuningRdpTest, OutputDominatesBaseForMuAtLeastOne) {
  std::mt19937 rng(5);
  AlphaGrid grid = AlphaGrid::Integers(2, 32);
  for (double mu : {1.0, 2.0, 15.0, 45.0, 200.0}) {
    RdpCurve base = RandomCurve(rng, grid);
    RdpCurve out = TuningRdp(base, mu);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_GE(out.eps()[i], base.eps()[i]);
    }
  }
}

TEST(TuningRdpTest, InfiniteBaseOrdersStayInfinite) {
  AlphaGrid grid = AlphaGrid::Integers(2, 4);
  RdpCurve base(grid, {0.1, kInf, 0.3});
  RdpCurve out = TuningRdp(base, 15.0);
  EXPECT_TRUE(std::isfinite(out.At(2.0)));
  EXPECT_TRUE(std::isinf(out.At(3.0)));
}

// ---- tailored two-sided bound ----

TEST(Variant1RdpTest, BoundaryLimitsAreExact) {
  std::mt19937 rng(17);
  AlphaGrid grid = AlphaGrid::Integers(2, 32);
  for (int trial = 0; trial < 20; ++trial) {
    RdpCurve e1 = RandomCurve(rng, grid);
    RdpCurve e2 = RandomCurve(rng, grid);
    for (int alpha = 2; alpha <= 32; ++alpha) {
      EXPECT_NEAR(Variant1Rdp(e1, e2, 0.0, alpha), e2.At(alpha), 1e-12);
      EXPECT_NEAR(Variant1Rdp(e1, e2, 1.0, alpha), e1.At(alpha), 1e-12);
    }
  }
}

TEST(Variant1RdpTest, NearBoundaryLimitsWithinTolerance) {
  std::mt19937 rng(23);
  AlphaGrid grid = AlphaGrid::Integers(2, 32);
  for (int trial = 0; trial < 20; ++trial) {
    RdpCurve e1 = RandomCurve(rng, grid);
    RdpCurve e2 = RandomCurve(rng, grid);
    for (int alpha : {2, 5, 17, 32}) {
      EXPECT_NEAR(Variant1Rdp(e1, e2, 1e-9, alpha), e2.At(alpha), 1e-6);
      EXPECT_NEAR(Variant1Rdp(e1, e2, 1.0 - 1e-9, alpha), e1.At(alpha), 1e-6);
    }
  }
}

// Non-private base: both directed bounds reduce to log(sum of binomial
// terms) = log 1 = 0.
TEST(Variant1RdpTest, ZeroCurvesGiveZero) {
  RdpCurve zero = RdpCurve::Zero(AlphaGrid::Integers(2, 16));
  for (double q : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    for (int alpha : {2, 3, 8, 16}) {
      EXPECT_NEAR(Variant1Rdp(zero, zero, q, alpha), 0.0, 1e-12);
    }
  }
}

TEST(Variant1RdpTest, ContinuousAndFiniteInQ) {
  std::mt19937 rng(29);
  AlphaGrid grid = AlphaGrid::Integers(2, 16);
  RdpCurve e1 = RandomCurve(rng, grid);
  RdpCurve e2 = RandomCurve(rng, grid);
  double prev = Variant1Rdp(e1, e2, 0.0, 9);
  for (int i = 1; i <= 100; ++i) {
    double q = static_cast<double>(i) / 100.0;
    double v = Variant1Rdp(e1, e2, q, 9);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_LT(std::abs(v - prev), 0.2);  // no jumps on a 0.01 grid
    prev = v;
  }
}

TEST(Variant1RdpTest, ErrorsOnBadArguments) {
  RdpCurve ok = RdpCurve::Zero(AlphaGrid::Integers(2, 8));
  RdpCurve missing = RdpCurve::Zero(AlphaGrid::Integers(2, 4));
  EXPECT_THROW(Variant1Rdp(ok, missing, 0.5, 8), MissingOrderError);
  EXPECT_THROW(Variant1Rdp(ok, ok, -0.1, 4), std::domain_error);
  EXPECT_THROW(Variant1Rdp(ok, ok, 1.5, 4), std::domain_error);
  EXPECT_THROW(Variant1Rdp(ok, ok, 0.5, 1), std::domain_error);
}

// Frozen reference-configuration regressions for the variant pipelines at
// delta=1e-5,
// from the same independent implementation as the baseline constant.
TEST(VariantPipelinesTest, ReferenceRegressions) {
  RdpCurve base = ReferenceBase();
  RdpCurve tuning15 = TuningRdp(base, 15.0);
  double v1 = RdpToDp(Variant1Curve(tuning15, base, 0.1), kDelta).epsilon;
  double v2 = RdpToDp(Variant2Curve(tuning15, base, 0.1), kDelta).epsilon;
  EXPECT_NEAR(v1, 2.772419860623515, 1e-10);
  EXPECT_NEAR(v2, 3.2928235304212086, 1e-10);

  RdpCurve tuning45 = TuningRdp(base, 45.0);
  EXPECT_NEAR(RdpToDp(Variant1Curve(tuning45, base, 0.05), kDelta).epsilon,
              6.812721321255178, 1e-10);
  EXPECT_NEAR(RdpToDp(Variant2Curve(tuning45, base, 0.05), kDelta).epsilon,
              6.494713565799721, 1e-10);
}

// Desk-scale dominance, reference configuration at mu=15. The strict
// ordering v1 <= v2 < baseline holds on q in {0.05,...,0.45}; at q=0.50 the
// variant-2 bound crosses the baseline (crossing sits near q=0.465), which
// is pinned here so a regression would surface.
TEST(VariantPipelinesTest, DominanceOrdering) {
  RdpCurve base = ReferenceBase();
  RdpCurve tuning15 = TuningRdp(base, 15.0);
  const double baseline = RdpToDp(tuning15, kDelta).epsilon;
  for (int i = 1; i <= 9; ++i) {
    double q = 0.05 * static_cast<double>(i);
    double v1 = RdpToDp(Variant1Curve(tuning15, base, q), kDelta).epsilon;
    double v2 = RdpToDp(Variant2Curve(tuning15, base, q), kDelta).epsilon;
    EXPECT_LE(v1, v2) << "q=" << q;
    EXPECT_LT(v2, baseline) << "q=" << q;
  }
  double v1_half = RdpToDp(Variant1Curve(tuning15, base, 0.5), kDelta).epsilon;
  double v2_half = RdpToDp(Variant2Curve(tuning15, base, 0.5), kDelta).epsilon;
  EXPECT_LE(v1_half, v2_half);
  EXPECT_LT(v1_half, baseline);
  EXPECT_GT(v2_half, baseline);  // the known crossing past q ~ 0.465
}

TEST(Variant2CurveTest, QZeroReducesToBase) {
  RdpCurve base = ReferenceBase();
  RdpCurve tuning15 = TuningRdp(base, 15.0);
  RdpCurve out = Variant2Curve(tuning15, base, 0.0);
  for (double a : base.grid().orders()) {
    EXPECT_DOUBLE_EQ(out.At(a), base.At(a));
  }
}

TEST(Variant2CurveTest, QOneAtOrderTwoAddsCurves) {
  RdpCurve base = ReferenceBase();
  RdpCurve tuning15 = TuningRdp(base, 15.0);
  RdpCurve out = Variant2Curve(tuning15, base, 1.0);
  EXPECT_NEAR(out.At(2.0), tuning15.At(2.0) + base.At(2.0), 1e-12);
}

// At mu=45 the two variants cross for small q.
TEST(VariantPipelinesTest, Mu45CrossingForSmallQ) {
  RdpCurve base = ReferenceBase();
  RdpCurve tuning45 = TuningRdp(base, 45.0);
  bool crossed = false;
  for (int i = 1; i <= 10; ++i) {
    double q = static_cast<double>(i) / 100.0;
    double v1 = RdpToDp(Variant1Curve(tuning45, base, q), kDelta).epsilon;
    double v2 = RdpToDp(Variant2Curve(tuning45, base, q), kDelta).epsilon;
    if (v2 < v1) crossed = true;
  }
  EXPECT_TRUE(crossed);
}

// ---- cost model ----

TEST(ExpectedCostTest, PaperRatios) {
  // mu/(mu q + 1) at (15, 0.1) is exactly 6; the variant-2 pipeline is the
  // configuration where that ratio is exact.
  CostModel m{1e4, 40.0, 15.0, 0.1};
  CostEstimate v2 = ExpectedCost(m, TuningVariant::kVariant2);
  EXPECT_DOUBLE_EQ(v2.baseline_ratio, 6.0);
  CostModel m45{1e4, 40.0, 45.0, 0.1};
  EXPECT_NEAR(ExpectedCost(m45, TuningVariant::kVariant2).baseline_ratio, 45.0 / 5.5, 1e-12);
  // Variant 1 trains the final model on the complement only.
  CostEstimate v1 = ExpectedCost(m, TuningVariant::kVariant1);
  EXPECT_NEAR(v1.baseline_ratio, 15.0 / (1.5 + 0.9), 1e-12);
  EXPECT_DOUBLE_EQ(v1.gradient_evals, (15.0 * 0.1 * 1e4 + 0.9 * 1e4) * 40.0);
}

TEST(ExpectedCostTest, DegenerateSubstitution) {
  // mu=1, q=1, variant 2: tuning costs n E and the final model n E, so the
  // baseline (n E) does half the work.
  CostModel m{100.0, 3.0, 1.0, 1.0};
  EXPECT_DOUBLE_EQ(ExpectedCost(m, TuningVariant::kVariant2).baseline_ratio, 0.5);
}

TEST(ExpectedCostTest, BaselineCountsAndValidation) {
  CostModel m{1000.0, 10.0, 15.0, 0.1};
  CostEstimate b = ExpectedCost(m, TuningVariant::kBaseline);
  EXPECT_DOUBLE_EQ(b.gradient_evals, 15.0 * 1000.0 * 10.0);
  EXPECT_DOUBLE_EQ(b.baseline_ratio, 1.0);
  CostModel bad{0.0, 10.0, 15.0, 0.1};
  EXPECT_THROW(ExpectedCost(bad, TuningVariant::kBaseline), std::invalid_argument);
}

TEST(TuningConfigTest, Validation) {
  TuningConfig c;
  c.mu = 15.0;
  c.q = 0.1;
  EXPECT_NO_THROW(c.Validate());
  c.mu = 0.0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c.mu = 1.0;
  c.q = 1.5;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
}

TEST(TuningVariantTest, StringRoundTrip) {
  for (TuningVariant v :
       {TuningVariant::kBaseline, TuningVariant::kVariant1, TuningVariant::kVariant2}) {
    EXPECT_EQ(TuningVariantFromString(ToString(v)), v);
  }
  EXPECT_THROW(TuningVariantFromString("variant3"), std::invalid_argument);
}

}  // namespace
}  // namespace dptune
