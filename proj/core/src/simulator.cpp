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

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include <nlohmann/json.hpp>

#include "dptune/calibration.hpp"
#include "dptune/parallel.hpp"

namespace dptune {

void SyntheticTask::Validate() const {
  if (n < 10) throw std::invalid_argument("task needs n >= 10");
  if (dim < 1) throw std::invalid_argument("task needs dim >= 1");
  if (class_separation < 0.0) throw std::invalid_argument("class separation must be >= 0");
}

nlohmann::json SyntheticTask::ToJson() const {
  return {{"n", n}, {"dim", dim}, {"class_separation", class_separation}, {"seed", seed}};
}

SyntheticTask SyntheticTask::FromJson(const nlohmann::json& j) {
  SyntheticTask t;
  t.n = j.at("n").get<long>();
  t.dim = j.at("dim").get<int>();
  t.class_separation = j.at("class_separation").get<double>();
  t.seed = j.at("seed").get<std::uint64_t>();
  t.Validate();
  return t;
}

Dataset MakeTask(const SyntheticTask& spec) {
  spec.Validate();
  SplitRng rng = SplitRng(spec.seed).Split(0);
  Dataset data;
  data.dim = spec.dim;
  data.features.resize(static_cast<std::size_t>(spec.n) * spec.dim);
  data.labels.resize(static_cast<std::size_t>(spec.n));
  const double half_sep = 0.5 * spec.class_separation;
  for (long i = 0; i < spec.n; ++i) {
    const int label = static_cast<int>(i % 2);
    data.labels[static_cast<std::size_t>(i)] = label;
    double* row = data.features.data() + static_cast<std::size_t>(i) * spec.dim;
    row[0] = (label == 1 ? half_sep : -half_sep) + kTaskStd * rng.Gaussian();
    for (int d = 1; d < spec.dim; ++d) row[d] = kTaskStd * rng.Gaussian();
  }
  data.train_count = spec.n * 8 / 10;
  return data;
}

std::vector<double> ClipGradient(std::span<const double> g, double clip) {
  if (!(clip > 0.0)) throw std::invalid_argument("clip must be > 0");
  double norm_sq = 0.0;
  for (double v : g) norm_sq += v * v;
  std::vector<double> out(g.begin(), g.end());
  const double norm = std::sqrt(norm_sq);
  if (norm > clip) {
    const double scale = clip / norm;
    for (double& v : out) v *= scale;
  }
  return out;
}

namespace {

double StableSigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Predict(const LogisticModel& model, std::span<const double> x) {
  double z = model.theta.back();
  for (std::size_t d = 0; d < x.size(); ++d) z += model.theta[d] * x[d];
  return z;
}

// Sum of clipped per-sample logistic gradients over the batch, scaled by the
// expected batch size, plus spherical Gaussian noise of per-coordinate
// standard deviation clip * sigma / expected_batch.
std::vector<double> PrivatizedGradient(const LogisticModel& model, const Dataset& data,
                                       std::span<const long> batch, const HyperParams& params,
                                       double sigma, double expected_batch, SplitRng& rng) {
  const std::size_t d = model.theta.size();
  std::vector<double> sum(d, 0.0);
  std::vector<double> g(d, 0.0);
  for (long row : batch) {
    auto x = data.Row(row);
    const double residual = StableSigmoid(Predict(model, x)) - data.labels[row];
    for (std::size_t k = 0; k + 1 < d; ++k) g[k] = residual * x[k];
    g[d - 1] = residual;
    std::vector<double> clipped = ClipGradient(g, params.clip);
    for (std::size_t k = 0; k < d; ++k) sum[k] += clipped[k];
  }
  const double noise_std = params.clip * sigma / expected_batch;
  for (std::size_t k = 0; k < d; ++k) {
    sum[k] = sum[k] / expected_batch + noise_std * rng.Gaussian();
  }
  return sum;
}

struct TrainedCandidate {
  TrialRecord record;
  LogisticModel model;
};

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

TrainedCandidate Train(const Dataset& data, const HyperParams& params, double sigma,
                       std::uint64_t seed, std::span<const long> rows,
                       const LogisticModel* warm_start) {
  params.Validate();
  if (sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
  SplitRng rng(seed);
  LogisticModel model = warm_start != nullptr ? *warm_start : LogisticModel(data.dim);
  const std::size_t d = model.theta.size();
  const double expected_batch =
      std::max(params.gamma * static_cast<double>(rows.size()), 1e-12);

  std::vector<double> adam_m(d, 0.0);
  std::vector<double> adam_v(d, 0.0);
  std::vector<long> batch;
  batch.reserve(static_cast<std::size_t>(2.0 * expected_batch) + 16);

  TrialRecord record;
  record.params = params;
  record.sigma = sigma;
  record.seed = seed;

  long step = 0;
  for (; step < params.steps; ++step) {
    batch.clear();
    for (long row : rows) {
      if (rng.Bernoulli(params.gamma)) batch.push_back(row);
    }
    record.gradient_evals += static_cast<long>(batch.size());
    std::vector<double> grad =
        PrivatizedGradient(model, data, batch, params, sigma, expected_batch, rng);
    if (params.optimizer == Optimizer::kSgd) {
      for (std::size_t k = 0; k < d; ++k) model.theta[k] -= params.eta * grad[k];
    } else {
      const double t = static_cast<double>(step + 1);
      const double corr1 = 1.0 - std::pow(kAdamBeta1, t);
      const double corr2 = 1.0 - std::pow(kAdamBeta2, t);
      for (std::size_t k = 0; k < d; ++k) {
        adam_m[k] = kAdamBeta1 * adam_m[k] + (1.0 - kAdamBeta1) * grad[k];
        adam_v[k] = kAdamBeta2 * adam_v[k] + (1.0 - kAdamBeta2) * grad[k] * grad[k];
        model.theta[k] -=
            params.eta * (adam_m[k] / corr1) / (std::sqrt(adam_v[k] / corr2) + kAdamEps);
      }
    }
    if (!model.Finite()) {
      ++step;
      break;
    }
  }
  record.steps_run = step;

  if (!model.Finite()) {
    record.score = 0.0;  // divergence is a legitimate tuning outcome
  } else {
    record.score = model.Accuracy(data, data.train_count, data.size());
  }
  return {std::move(record), std::move(model)};
}

std::vector<long> AllTrainingRows(const Dataset& data) {
  std::vector<long> rows(static_cast<std::size_t>(data.train_count));
  for (long i = 0; i < data.train_count; ++i) rows[static_cast<std::size_t>(i)] = i;
  return rows;
}

}  // namespace

double LogisticModel::Accuracy(const Dataset& data, long begin, long end) const {
  if (end <= begin) return 0.0;
  long correct = 0;
  for (long i = begin; i < end; ++i) {
    const int predicted = Predict(*this, data.Row(i)) >= 0.0 ? 1 : 0;
    if (predicted == data.labels[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(end - begin);
}

bool LogisticModel::Finite() const {
  for (double v : theta) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void DpSgdStep(LogisticModel& model, const Dataset& data, std::span<const long> batch,
               const HyperParams& params, double sigma, double expected_batch, SplitRng& rng) {
  std::vector<double> grad =
      PrivatizedGradient(model, data, batch, params, sigma, expected_batch, rng);
  for (std::size_t k = 0; k < model.theta.size(); ++k) {
    model.theta[k] -= params.eta * grad[k];
  }
}

TrialRecord TrainCandidate(const Dataset& data, const HyperParams& params, double sigma,
                           std::uint64_t seed, long row_begin, long row_end,
                           const LogisticModel* warm_start) {
  std::vector<long> rows;
  rows.reserve(static_cast<std::size_t>(row_end - row_begin));
  for (long i = row_begin; i < row_end; ++i) rows.push_back(i);
  return Train(data, params, sigma, seed, rows, warm_start).record;
}

TrialRecord TrainCandidate(const Dataset& data, const HyperParams& params, double sigma,
                           std::uint64_t seed) {
  return TrainCandidate(data, params, sigma, seed, 0, data.train_count, nullptr);
}

int PoissonSample(double mu, SplitRng& rng) { return rng.Poisson(mu); }

nlohmann::json TrialRecord::ToJson() const {
  return {{"params", params.ToJson()}, {"sigma", sigma},
          {"score", score},           {"seed", seed},
          {"steps_run", steps_run},   {"gradient_evals", gradient_evals}};
}

nlohmann::json ExperimentReport::ToJson() const {
  nlohmann::json trial_list = nlohmann::json::array();
  for (const auto& t : trials) trial_list.push_back(t.ToJson());
  return {{"variant", ToString(variant)},
          {"final_epsilon", final_epsilon},
          {"final_score", final_score},
          {"expected_cost", expected_cost},
          {"actual_gradient_evals", actual_gradient_evals},
          {"k_draw", k_draw},
          {"chosen_params", chosen_params.ToJson()},
          {"sigma", sigma},
          {"trials", trial_list}};
}

CandidatePool BuildCandidatePool(std::span<const HyperParams> grid, std::optional<double> sigma,
                                 std::optional<PrivacyTarget> target,
                                 const AlphaGrid& alpha_grid) {
  if (grid.empty()) throw std::invalid_argument("candidate grid must be nonempty");
  if (sigma.has_value() == target.has_value()) {
    throw std::invalid_argument("provide exactly one of a fixed sigma or a privacy target");
  }
  for (const auto& p : grid) p.Validate();

  // One calibration / curve per distinct (gamma, steps) pair.
  std::map<std::pair<double, long>, double> pair_sigma;
  std::vector<RdpCurve> curves;
  for (const auto& p : grid) {
    auto key = std::make_pair(p.gamma, p.steps);
    if (pair_sigma.contains(key)) continue;
    double s = sigma.has_value() ? *sigma : CalibrateSigma(p.gamma, p.steps, *target, alpha_grid);
    pair_sigma[key] = s;
    curves.push_back(
        MechanismSpec::Composed(MechanismSpec::SubsampledGaussian(s, p.gamma), p.steps)
            .Curve(alpha_grid));
  }

  CandidatePool pool{std::vector<HyperParams>(grid.begin(), grid.end()),
                     std::vector<double>(),
                     UniformGridBound(curves)};
  pool.sigmas.reserve(grid.size());
  for (const auto& p : grid) pool.sigmas.push_back(pair_sigma.at({p.gamma, p.steps}));
  return pool;
}

ExperimentReport RunTuning(const Dataset& data, const TuningConfig& config,
                           const CandidatePool& pool, double delta, std::uint64_t seed,
                           bool warm_start) {
  config.Validate();
  if (pool.params.empty()) throw std::invalid_argument("candidate pool must be nonempty");
  const bool is_baseline = config.variant == TuningVariant::kBaseline;

  // Stream layout (all derived from the root seed):
  //   0  tuning-subset membership draws
  //   1  Poisson candidate count K
  //   2  arbitrary hyperparameter pick when K = 0
  //   3  final-model training
  //   100 + i  candidate i (grid pick, then its training stream)
  SplitRng root(seed);
  SplitRng subset_rng = root.Split(0);
  SplitRng k_rng = root.Split(1);
  SplitRng arb_rng = root.Split(2);
  SplitRng final_rng = root.Split(3);

  const std::vector<long> all_rows = AllTrainingRows(data);
  std::vector<long> tuning_rows;
  if (is_baseline) {
    tuning_rows = all_rows;
  } else {
    for (long i = 0; i < data.train_count; ++i) {
      if (subset_rng.Bernoulli(config.q)) tuning_rows.push_back(i);
    }
  }

  const int k_draw = PoissonSample(config.mu, k_rng);

  // Candidates are independent given their streams; train them in parallel
  // and reduce by index.
  std::vector<TrainedCandidate> candidates;
  candidates.reserve(static_cast<std::size_t>(k_draw));
  for (int i = 0; i < k_draw; ++i) {
    candidates.push_back({TrialRecord{}, LogisticModel(data.dim)});
  }
  ParallelFor(static_cast<std::size_t>(k_draw), [&](std::size_t i) {
    SplitRng crng = root.Split(100 + i);
    const std::size_t pick = crng.UniformIndex(pool.params.size());
    candidates[i] = Train(data, pool.params[pick], pool.sigmas[pick],
                          crng.Split(0).seed(), tuning_rows, nullptr);
  });

  // Best of the K runs; ties resolve to the earliest candidate.
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].record.score > candidates[best].record.score) best = i;
  }

  HyperParams tuned_params;
  double tuned_sigma = 0.0;
  LogisticModel tuned_model(data.dim);
  if (k_draw == 0) {
    const std::size_t pick = arb_rng.UniformIndex(pool.params.size());
    tuned_params = pool.params[pick];
    tuned_sigma = pool.sigmas[pick];
  } else {
    tuned_params = candidates[best].record.params;
    tuned_sigma = candidates[best].record.sigma;
    tuned_model = candidates[best].model;
  }

  ExperimentReport report;
  report.variant = config.variant;
  report.k_draw = k_draw;
  for (const auto& c : candidates) report.trials.push_back(c.record);
  double actual_evals = 0.0;
  for (const auto& c : candidates) actual_evals += static_cast<double>(c.record.gradient_evals);

  if (is_baseline) {
    report.chosen_params = tuned_params;
    report.sigma = tuned_sigma;
    report.final_score = k_draw == 0
                             ? tuned_model.Accuracy(data, data.train_count, data.size())
                             : candidates[best].record.score;
  } else {
    const long m = static_cast<long>(tuning_rows.size());
    std::vector<long> final_rows;
    if (config.variant == TuningVariant::kVariant1) {
      std::vector<bool> in_subset(static_cast<std::size_t>(data.train_count), false);
      for (long row : tuning_rows) in_subset[static_cast<std::size_t>(row)] = true;
      for (long i = 0; i < data.train_count; ++i) {
        if (!in_subset[static_cast<std::size_t>(i)]) final_rows.push_back(i);
      }
    } else {
      final_rows = all_rows;
    }

    // Transfer the winning hyperparameters from the tuning-set size to the
    // final-set size. An empty subset learned nothing; the parameters pass
    // through unscaled.
    const long n_final = static_cast<long>(final_rows.size());
    HyperParams final_params = (m >= 1 && n_final >= 1)
                                   ? Extrapolate(tuned_params, static_cast<double>(m),
                                                 static_cast<double>(n_final))
                                   : tuned_params;

    TrainedCandidate final_run =
        Train(data, final_params, tuned_sigma, final_rng.Split(0).seed(), final_rows,
              warm_start ? &tuned_model : nullptr);
    report.chosen_params = final_params;
    report.sigma = tuned_sigma;
    report.final_score = final_run.record.score;
    actual_evals += static_cast<double>(final_run.record.gradient_evals);
  }
  report.actual_gradient_evals = actual_evals;

  // Accounting: the simulator never computes privacy on its own.
  const RdpCurve tuning_curve = TuningRdp(pool.uniform, config.mu);
  RdpCurve total = tuning_curve;
  if (config.variant == TuningVariant::kVariant1) {
    total = Variant1Curve(tuning_curve, pool.uniform, config.q);
  } else if (config.variant == TuningVariant::kVariant2) {
    total = Variant2Curve(tuning_curve, pool.uniform, config.q);
  }
  report.final_epsilon = RdpToDp(total, delta).epsilon;

  double mean_epochs = 0.0;
  for (const auto& p : pool.params) {
    mean_epochs += p.gamma * static_cast<double>(p.steps);
  }
  mean_epochs /= static_cast<double>(pool.params.size());
  CostModel cost{static_cast<double>(data.train_count), mean_epochs, config.mu,
                 config.q > 0.0 ? config.q : 1.0};
  report.expected_cost = ExpectedCost(cost, config.variant).gradient_evals;
  return report;
}

}  // namespace dptune
