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
#include "dptune/simulator.hpp"

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "dptune/calibration.hpp"
#include "dptune/subsampling.hpp"

namespace dptune {
namespace {

SyntheticTask EasyTask(long n = 5000, std::uint64_t seed = 7) {
  return SyntheticTask{n, 2, 3.0, seed};
}

// Test-only oracle: plain full-batch gradient descent on the logistic loss,
// independent of the simulator's DP training path.
double PlainLogisticAccuracy(const Dataset& data, int iterations, double lr) {
  std::vector<double> theta(static_cast<std::size_t>(data.dim) + 1, 0.0);
  const double inv_n = 1.0 / static_cast<double>(data.train_count);
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> grad(theta.size(), 0.0);
    for (long i = 0; i < data.train_count; ++i) {
      auto x = data.Row(i);
      double z = theta.back();
      for (int d = 0; d < data.dim; ++d) z += theta[d] * x[d];
      double p = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
      double r = p - data.labels[i];
      for (int d = 0; d < data.dim; ++d) grad[d] += r * x[d];
      grad.back() += r;
    }
    for (std::size_t k = 0; k < theta.size(); ++k) theta[k] -= lr * inv_n * grad[k];
  }
  long correct = 0;
  for (long i = data.train_count; i < data.size(); ++i) {
    auto x = data.Row(i);
    double z = theta.back();
    for (int d = 0; d < data.dim; ++d) z += theta[d] * x[d];
    if ((z >= 0.0 ? 1 : 0) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size() - data.train_count);
}

TEST(MakeTaskTest, DeterministicInSeed) {
  Dataset a = MakeTask(EasyTask());
  Dataset b = MakeTask(EasyTask());
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.train_count, b.train_count);
  Dataset c = MakeTask(EasyTask(5000, 8));
  EXPECT_NE(a.features, c.features);
}

TEST(MakeTaskTest, ZeroSeparationIsChanceLevel) {
  SyntheticTask spec{4000, 2, 0.0, 3};
  Dataset data = MakeTask(spec);
  // Indistinguishable classes: even the non-private oracle stays near 0.5.
  double acc = PlainLogisticAccuracy(data, 200, 0.5);
  EXPECT_NEAR(acc, 0.5, 0.06);
}

// Recorded before the DP build: the non-private oracle reaches 0.9770 on
// the (n=5000, dim=2, sep=3, seed=7) task, comfortably above the 0.95
// floor.
TEST(MakeTaskTest, NonPrivateOracleReachesHighAccuracy) {
  Dataset data = MakeTask(EasyTask());
  double acc = PlainLogisticAccuracy(data, 400, 1.0);
  EXPECT_GE(acc, 0.95);
}

TEST(MakeTaskTest, SplitAndShapeInvariants) {
  SyntheticTask spec{1000, 3, 2.0, 11};
  Dataset data = MakeTask(spec);
  EXPECT_EQ(data.size(), 1000);
  EXPECT_EQ(data.train_count, 800);
  EXPECT_EQ(data.dim, 3);
  EXPECT_EQ(data.features.size(), 3000u);
  EXPECT_THROW(MakeTask(SyntheticTask{5, 2, 1.0, 0}), std::invalid_argument);
  EXPECT_THROW(MakeTask(SyntheticTask{100, 0, 1.0, 0}), std::invalid_argument);
}

TEST(ClipGradientTest, Examples) {
  std::vector<double> g = {3.0, 4.0};
  std::vector<double> clipped = ClipGradient(g, 1.0);
  EXPECT_NEAR(clipped[0], 0.6, 1e-15);
  EXPECT_NEAR(clipped[1], 0.8, 1e-15);
  std::vector<double> small = {0.1, 0.0};
  EXPECT_EQ(ClipGradient(small, 1.0), small);
  std::vector<double> zero = {0.0, 0.0, 0.0};
  EXPECT_EQ(ClipGradient(zero, 1.0), zero);
}

TEST(DpSgdStepTest, NoiselessFullBatchIsGradientStep) {
  Dataset data = MakeTask(EasyTask(200, 1));
  HyperParams params{0.5, 100.0, 1.0, 1, Optimizer::kSgd};  // clip too large to bind
  LogisticModel model(data.dim);
  std::vector<long> batch(static_cast<std::size_t>(data.train_count));
  std::iota(batch.begin(), batch.end(), 0L);
  SplitRng rng(0);
  DpSgdStep(model, data, batch, params, 0.0, static_cast<double>(data.train_count), rng);
  // From the zero model, p = 1/2 for every sample, so the average gradient
  // is mean((1/2 - y) x); check the bias coordinate, mean(1/2 - y) = 0 for
  // the balanced task.
  EXPECT_NEAR(model.theta.back(), 0.0, 1e-12);
  // And the update actually moved the separating coordinate.
  EXPECT_GT(std::abs(model.theta[0]), 1e-4);
  // eta = 0 leaves the model untouched.
  LogisticModel frozen(data.dim);
  HyperParams zero_eta = params;
  zero_eta.eta = 0.0;
  SplitRng rng2(0);
  DpSgdStep(frozen, data, batch, zero_eta, 0.0, static_cast<double>(data.train_count), rng2);
  for (double v : frozen.theta) EXPECT_DOUBLE_EQ(v, 0.0);
}

// Monte-Carlo check of the injected noise scale: with an empty batch the
// update is pure noise, -eta * Z with Z ~ N(0, (C sigma / B)^2 I).
TEST(DpSgdStepTest, EmpiricalNoiseVariance) {
  Dataset data = MakeTask(EasyTask(100, 2));
  HyperParams params{0.7, 1.5, 0.1, 1, Optimizer::kSgd};
  const double sigma = 2.0;
  const double expected_batch = params.gamma * 100.0;
  const double want =
      params.eta * params.eta * params.clip * params.clip * sigma * sigma /
      (expected_batch * expected_batch);
  SplitRng rng(42);
  const int kSamples = 100000;
  double sum_sq = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    LogisticModel model(data.dim);
    DpSgdStep(model, data, std::span<const long>{}, params, sigma, expected_batch, rng);
    sum_sq += model.theta[0] * model.theta[0];
  }
  double got = sum_sq / kSamples;
  EXPECT_NEAR(got, want, 0.05 * want);
}

TEST(TrainCandidateTest, ZeroRateScoresLikeUntrained) {
  Dataset data = MakeTask(EasyTask(500, 3));
  HyperParams params{0.0, 1.0, 0.1, 50, Optimizer::kSgd};
  TrialRecord r = TrainCandidate(data, params, 1.0, 9);
  LogisticModel untrained(data.dim);
  EXPECT_DOUBLE_EQ(r.score, untrained.Accuracy(data, data.train_count, data.size()));
}

// Recorded with the non-private oracle before the DP build: sigma = 0 with
// a sensible learning rate reaches ~0.97 on the easy task.
TEST(TrainCandidateTest, NoiselessTrainingLearns) {
  Dataset data = MakeTask(EasyTask());
  HyperParams params{2.0, 1.0, 0.05, 400, Optimizer::kSgd};
  TrialRecord r = TrainCandidate(data, params, 0.0, 11);
  EXPECT_GE(r.score, 0.9);
}

TEST(TrainCandidateTest, DeterministicInSeed) {
  Dataset data = MakeTask(EasyTask(400, 5));
  HyperParams params{0.5, 1.0, 0.1, 60, Optimizer::kSgd};
  TrialRecord a = TrainCandidate(data, params, 1.0, 1234);
  TrialRecord b = TrainCandidate(data, params, 1.0, 1234);
  EXPECT_EQ(a.score, b.score);
  EXPECT_EQ(a.steps_run, b.steps_run);
  EXPECT_EQ(a.gradient_evals, b.gradient_evals);
  TrialRecord c = TrainCandidate(data, params, 1.0, 1235);
  EXPECT_NE(a.gradient_evals, c.gradient_evals);  // different Poisson batches
}

TEST(TrainCandidateTest, DivergenceScoresZero) {
  Dataset data = MakeTask(EasyTask(400, 5));
  // Learning rate times noise scale overflows the iterates immediately;
  // that is a legitimate tuning outcome, not an exception.
  HyperParams params{1e100, 1.0, 0.5, 30, Optimizer::kSgd};
  TrialRecord r = TrainCandidate(data, params, 1e280, 4);
  EXPECT_EQ(r.score, 0.0);
  EXPECT_LT(r.steps_run, 30);
}

TEST(TrainCandidateTest, AdamPathTrains) {
  Dataset data = MakeTask(EasyTask(1000, 13));
  HyperParams params{0.05, 1.0, 0.1, 200, Optimizer::kAdam};
  TrialRecord r = TrainCandidate(data, params, 0.5, 21);
  EXPECT_GE(r.score, 0.8);
}

TEST(PoissonSampleTest, MomentsAndSupport) {
  SplitRng rng(77);
  const double mu = 15.0;
  const int kDraws = 100000;
  double sum = 0.0;
  int zeros = 0;
  for (int i = 0; i < kDraws; ++i) {
    int k = PoissonSample(mu, rng);
    ASSERT_GE(k, 0);
    sum += k;
  }
  EXPECT_NEAR(sum / kDraws, mu, 0.01 * mu);

  SplitRng rng3(78);
  for (int i = 0; i < kDraws; ++i) {
    if (PoissonSample(3.0, rng3) == 0) ++zeros;
  }
  // P(K=0) = e^{-3} ~ 0.0498; three standard errors of the estimate.
  double p0 = std::exp(-3.0);
  double se = std::sqrt(p0 * (1.0 - p0) / kDraws);
  EXPECT_NEAR(static_cast<double>(zeros) / kDraws, p0, 3.0 * se);

  SplitRng rng45(79);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_GE(PoissonSample(45.0, rng45), 0);
  }
}

// ---- run_tuning ----

CandidatePool LrPool(double gamma, long steps, double sigma,
                     const std::vector<double>& etas) {
  std::vector<HyperParams> grid;
  for (double eta : etas) {
    grid.push_back(HyperParams{eta, 1.0, gamma, steps, Optimizer::kSgd});
  }
  return BuildCandidatePool(grid, sigma, std::nullopt);
}

TEST(RunTuningTest, ExhaustiveSearchLimit) {
  Dataset data = MakeTask(EasyTask(600, 17));
  CandidatePool pool = LrPool(0.1, 80, 0.5, {1e-4, 0.01, 0.3, 1.0, 3.0});
  // Reference: train every candidate directly and take the best score.
  double best_ref = 0.0;
  for (std::size_t i = 0; i < pool.params.size(); ++i) {
    for (std::uint64_t s : {900u, 901u, 902u}) {
      best_ref = std::max(
          best_ref, TrainCandidate(data, pool.params[i], pool.sigmas[i], s).score);
    }
  }
  TuningConfig config{200.0, 0.1, TuningVariant::kBaseline,
                      MechanismSpec::SubsampledGaussian(0.5, 0.1)};
  ExperimentReport report = RunTuning(data, config, pool, 1e-5, 31);
  EXPECT_EQ(report.k_draw, static_cast<int>(report.trials.size()));
  EXPECT_GE(report.final_score, best_ref - 0.03);
}

TEST(RunTuningTest, DeterministicReplay) {
  Dataset data = MakeTask(EasyTask(500, 19));
  CandidatePool pool = LrPool(0.1, 50, 1.0, {0.05, 0.5, 2.0});
  TuningConfig config{10.0, 0.2, TuningVariant::kVariant1,
                      MechanismSpec::SubsampledGaussian(1.0, 0.1)};
  ExperimentReport a = RunTuning(data, config, pool, 1e-5, 555);
  ExperimentReport b = RunTuning(data, config, pool, 1e-5, 555);
  EXPECT_EQ(a.ToJson().dump(), b.ToJson().dump());
}

// The report's epsilon must be exactly what the accounting modules produce
// for the recorded configuration; the simulator never computes privacy on
// its own.
TEST(RunTuningTest, AccountingConsistency) {
  Dataset data = MakeTask(EasyTask(500, 23));
  CandidatePool pool = LrPool(0.02, 50, 2.0, {0.05, 0.5});
  const double delta = 1e-5;
  for (TuningVariant v :
       {TuningVariant::kBaseline, TuningVariant::kVariant1, TuningVariant::kVariant2}) {
    TuningConfig config{12.0, 0.25, v, MechanismSpec::SubsampledGaussian(2.0, 0.02)};
    ExperimentReport report = RunTuning(data, config, pool, delta, 777);
    RdpCurve tuning = TuningRdp(pool.uniform, config.mu);
    double expected = 0.0;
    if (v == TuningVariant::kBaseline) {
      expected = RdpToDp(tuning, delta).epsilon;
    } else if (v == TuningVariant::kVariant1) {
      expected = RdpToDp(Variant1Curve(tuning, pool.uniform, config.q), delta).epsilon;
    } else {
      expected = RdpToDp(Variant2Curve(tuning, pool.uniform, config.q), delta).epsilon;
    }
    EXPECT_DOUBLE_EQ(report.final_epsilon, expected) << ToString(v);
    EXPECT_TRUE(std::isfinite(report.final_epsilon)) << ToString(v);
  }
}

TEST(RunTuningTest, DegenerateFullSubset) {
  Dataset data = MakeTask(EasyTask(500, 29));
  CandidatePool pool = LrPool(0.02, 50, 2.0, {0.5});
  TuningConfig config{5.0, 1.0, TuningVariant::kVariant2,
                      MechanismSpec::SubsampledGaussian(2.0, 0.02)};
  ExperimentReport report = RunTuning(data, config, pool, 1e-5, 41);
  RdpCurve tuning = TuningRdp(pool.uniform, 5.0);
  EXPECT_DOUBLE_EQ(report.final_epsilon,
                   RdpToDp(Add(SubsampleCurve(tuning, 1.0), pool.uniform), 1e-5).epsilon);
  // q = 1 tunes on everything and extrapolation is the identity.
  EXPECT_GT(report.k_draw, 0);
  EXPECT_DOUBLE_EQ(report.chosen_params.eta, 0.5);
}

// Reported epsilon is non-decreasing in mu and in T for each variant.
TEST(RunTuningTest, EpsilonMonotoneInMuAndSteps) {
  Dataset data = MakeTask(EasyTask(300, 31));
  const double delta = 1e-5;
  for (TuningVariant v :
       {TuningVariant::kBaseline, TuningVariant::kVariant1, TuningVariant::kVariant2}) {
    double prev = 0.0;
    for (double mu : {2.0, 8.0, 32.0}) {
      CandidatePool pool = LrPool(0.02, 40, 2.0, {0.5});
      TuningConfig config{mu, 0.2, v, MechanismSpec::SubsampledGaussian(2.0, 0.02)};
      double eps = RunTuning(data, config, pool, delta, 51).final_epsilon;
      EXPECT_GE(eps, prev) << ToString(v) << " mu=" << mu;
      prev = eps;
    }
    prev = 0.0;
    for (long steps : {20L, 40L, 80L}) {
      CandidatePool pool = LrPool(0.02, steps, 2.0, {0.5});
      TuningConfig config{8.0, 0.2, v, MechanismSpec::SubsampledGaussian(2.0, 0.02)};
      double eps = RunTuning(data, config, pool, delta, 52).final_epsilon;
      EXPECT_GE(eps, prev) << ToString(v) << " steps=" << steps;
      prev = eps;
    }
  }
}

// Gradient-evaluation bookkeeping: averaged over replications the actual
// count approaches the cost model's expectation.
TEST(RunTuningTest, GradientEvalBookkeeping) {
  Dataset data = MakeTask(EasyTask(1000, 37));
  CandidatePool pool = LrPool(0.1, 60, 1.0, {0.2, 0.8});
  for (TuningVariant v :
       {TuningVariant::kBaseline, TuningVariant::kVariant1, TuningVariant::kVariant2}) {
    TuningConfig config{10.0, 0.2, v, MechanismSpec::SubsampledGaussian(1.0, 0.1)};
    double actual = 0.0, expected = 0.0;
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
      ExperimentReport r = RunTuning(data, config, pool, 1e-5, 6000 + rep);
      actual += r.actual_gradient_evals;
      expected += r.expected_cost;
    }
    EXPECT_NEAR(actual / expected, 1.0, 0.10) << ToString(v);
  }
}

TEST(RunTuningTest, WarmStartChangesOnlyTheFinalTraining) {
  Dataset data = MakeTask(EasyTask(500, 43));
  CandidatePool pool = LrPool(0.05, 60, 1.0, {0.3, 1.0});
  TuningConfig config{8.0, 0.3, TuningVariant::kVariant1,
                      MechanismSpec::SubsampledGaussian(1.0, 0.05)};
  ExperimentReport cold = RunTuning(data, config, pool, 1e-5, 99, false);
  ExperimentReport warm = RunTuning(data, config, pool, 1e-5, 99, true);
  // Same candidates and accounting either way; only the final model differs.
  ASSERT_EQ(cold.trials.size(), warm.trials.size());
  for (std::size_t i = 0; i < cold.trials.size(); ++i) {
    EXPECT_EQ(cold.trials[i].score, warm.trials[i].score);
  }
  EXPECT_DOUBLE_EQ(cold.final_epsilon, warm.final_epsilon);
  ExperimentReport warm2 = RunTuning(data, config, pool, 1e-5, 99, true);
  EXPECT_EQ(warm.ToJson().dump(), warm2.ToJson().dump());
}

// The candidate parallelism honors DP_TUNE_THREADS without changing any
// result.
TEST(RunTuningTest, WorkerCountDoesNotChangeResults) {
  Dataset data = MakeTask(EasyTask(500, 47));
  CandidatePool pool = LrPool(0.05, 60, 1.0, {0.3, 1.0, 3.0});
  TuningConfig config{12.0, 0.25, TuningVariant::kVariant2,
                      MechanismSpec::SubsampledGaussian(1.0, 0.05)};
  setenv("DP_TUNE_THREADS", "1", 1);
  ExperimentReport serial = RunTuning(data, config, pool, 1e-5, 1234);
  setenv("DP_TUNE_THREADS", "3", 1);
  ExperimentReport threaded = RunTuning(data, config, pool, 1e-5, 1234);
  unsetenv("DP_TUNE_THREADS");
  EXPECT_EQ(serial.ToJson().dump(), threaded.ToJson().dump());
}

TEST(BuildCandidatePoolTest, RequiresExactlyOneSigmaSource) {
  std::vector<HyperParams> grid = {HyperParams{0.1, 1.0, 0.1, 10, Optimizer::kSgd}};
  EXPECT_THROW(BuildCandidatePool(grid, std::nullopt, std::nullopt), std::invalid_argument);
  EXPECT_THROW(BuildCandidatePool(grid, 1.0, PrivacyTarget{1.0, 1e-5}), std::invalid_argument);
  CandidatePool pool = BuildCandidatePool(grid, std::nullopt, PrivacyTarget{1.0, 1e-5});
  ASSERT_EQ(pool.sigmas.size(), 1u);
  // The calibrated pool meets its target.
  EXPECT_LE(ForwardEpsilon(pool.sigmas[0], 0.1, 10, 1e-5), 1.0);
  EXPECT_DOUBLE_EQ(RdpToDp(pool.uniform, 1e-5).epsilon,
                   ForwardEpsilon(pool.sigmas[0], 0.1, 10, 1e-5));
}

}  // namespace
}  // namespace dptune
