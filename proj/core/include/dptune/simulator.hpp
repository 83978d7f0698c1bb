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
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dptune/extrapolation.hpp"
#include "dptune/rng.hpp"
#include "dptune/tuning.hpp"

// Desk-scale end-to-end reproduction of the tuning protocols: DP-SGD (and
// DP-Adam) logistic regression on synthetic two-class data, Poisson-count
// random search, and the three pipelines. The simulator never computes
// privacy itself; every reported epsilon comes from the accounting modules.
namespace dptune {

// Two Gaussian blobs at means +-(class_separation/2) along the first axis,
// per-coordinate standard deviation kTaskStd, 80/20 train/test split,
// deterministic in seed.
struct SyntheticTask {
  long n = 1000;
  int dim = 2;
  double class_separation = 3.0;
  std::uint64_t seed = 0;

  void Validate() const;
  nlohmann::json ToJson() const;
  static SyntheticTask FromJson(const nlohmann::json& j);
};

inline constexpr double kTaskStd = 0.75;

struct Dataset {
  int dim = 0;
  // Row-major features; labels in {0, 1}. The first train_count rows are
  // the (private) training split, the rest the public test split.
  std::vector<double> features;
  std::vector<int> labels;
  long train_count = 0;

  long size() const { return static_cast<long>(labels.size()); }
  long test_count() const { return size() - train_count; }
  std::span<const double> Row(long i) const {
    return {features.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
  }
};

Dataset MakeTask(const SyntheticTask& spec);

// One simulated candidate run.
struct TrialRecord {
  HyperParams params;
  double sigma = 0.0;
  double score = 0.0;  // test accuracy in [0, 1]
  std::uint64_t seed = 0;
  long steps_run = 0;
  long gradient_evals = 0;  // per-sample gradient computations

  nlohmann::json ToJson() const;
};

// g unchanged if ||g||_2 <= clip, else rescaled to norm clip.
std::vector<double> ClipGradient(std::span<const double> g, double clip);

// Logistic-regression model: weights for each feature plus a trailing bias.
struct LogisticModel {
  std::vector<double> theta;  // size dim + 1

  explicit LogisticModel(int dim) : theta(static_cast<std::size_t>(dim) + 1, 0.0) {}
  double Accuracy(const Dataset& data, long begin, long end) const;
  bool Finite() const;
};

// One DP-SGD update on the given batch of training-row indices:
//   theta <- theta - eta * (sum of clipped per-sample gradients / B + Z),
// where B is the expected batch size gamma * train_count and
// Z ~ N(0, clip^2 sigma^2 / B^2 I). Deterministic in the rng state.
void DpSgdStep(LogisticModel& model, const Dataset& data, std::span<const long> batch,
               const HyperParams& params, double sigma, double expected_batch, SplitRng& rng);

// Runs params.steps Poisson-sampled DP-SGD (or DP-Adam on the same
// privatized gradients) steps over the training rows in [row_begin,
// row_end); scores on the public test split. A diverged model (non-finite
// parameters) records score 0 rather than raising: a bad hyperparameter is
// a legitimate tuning outcome. When warm_start is given, training continues
// from it instead of a fresh model.
TrialRecord TrainCandidate(const Dataset& data, const HyperParams& params, double sigma,
                           std::uint64_t seed, long row_begin, long row_end,
                           const LogisticModel* warm_start = nullptr);

TrialRecord TrainCandidate(const Dataset& data, const HyperParams& params, double sigma,
                           std::uint64_t seed);

// Exact Poisson draw (exposed for the protocol and its tests).
int PoissonSample(double mu, SplitRng& rng);

struct ExperimentReport {
  TuningVariant variant = TuningVariant::kBaseline;
  double final_epsilon = 0.0;  // converted at the configured delta
  double final_score = 0.0;
  double expected_cost = 0.0;         // gradient evaluations, in expectation
  double actual_gradient_evals = 0.0;
  int k_draw = 0;                     // Poisson candidate count
  HyperParams chosen_params;          // after extrapolation for the variants
  double sigma = 0.0;
  std::vector<TrialRecord> trials;

  nlohmann::json ToJson() const;
};

// The candidate pool: hyperparameter grid entries, their calibrated noise
// multipliers, and the uniform RDP curve bounding every candidate.
struct CandidatePool {
  std::vector<HyperParams> params;
  std::vector<double> sigmas;
  RdpCurve uniform;
};

// Builds the pool for a grid. With a fixed sigma every candidate shares it;
// with a privacy target sigma is calibrated per distinct (gamma, steps)
// pair. The uniform curve is the pointwise max over the candidates' forward
// curves.
CandidatePool BuildCandidatePool(std::span<const HyperParams> grid,
                                 std::optional<double> sigma,
                                 std::optional<PrivacyTarget> target,
                                 const AlphaGrid& alpha_grid = AlphaGrid::Default());

// Runs one tuning pipeline on the dataset:
//   baseline   Poisson-count random search over the full training split;
//              the best candidate model is the final model.
//   variant 1  draw X1 by Poisson(q) from the training split, tune on X1,
//              extrapolate the winning hyperparameters from |X1| to
//              |train| - |X1|, train the final model on the complement.
//   variant 2  as variant 1 but the final model trains on the full split.
// K = 0 returns the default-initialized model with hyperparameters drawn
// arbitrarily (uniformly) from the grid. final_epsilon is computed by the
// accounting modules for the matching variant. Candidates train in
// parallel, each on its own RNG stream; the result is independent of the
// worker count.
ExperimentReport RunTuning(const Dataset& data, const TuningConfig& config,
                           const CandidatePool& pool, double delta, std::uint64_t seed,
                           bool warm_start = false);

}  // namespace dptune
