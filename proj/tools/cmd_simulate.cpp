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
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "dptune/simulator.hpp"
#include "svg_plot.hpp"

namespace dptune::cli {
namespace {

namespace fs = std::filesystem;

struct SimulateConfig {
  SyntheticTask task;
  double mu = 15.0;
  double q = 0.1;
  std::vector<TuningVariant> variants;
  std::vector<HyperParams> grid;
  std::optional<double> sigma;
  std::optional<PrivacyTarget> target;
  double delta = 1e-5;
  bool warm_start = false;
};

SimulateConfig ParseConfig(const nlohmann::json& j) {
  SimulateConfig cfg;
  cfg.task = SyntheticTask::FromJson(j.at("task"));
  const auto& tuning = j.at("tuning");
  cfg.mu = tuning.at("mu").get<double>();
  cfg.q = tuning.at("q").get<double>();
  if (!(cfg.mu > 0.0)) throw std::invalid_argument("tuning.mu must be > 0");
  if (!(cfg.q >= 0.0 && cfg.q <= 1.0)) throw std::invalid_argument("tuning.q out of [0, 1]");

  if (j.contains("variants")) {
    for (const auto& v : j.at("variants")) {
      cfg.variants.push_back(TuningVariantFromString(v.get<std::string>()));
    }
  } else {
    cfg.variants = {TuningVariant::kBaseline, TuningVariant::kVariant1,
                    TuningVariant::kVariant2};
  }
  if (cfg.variants.empty()) throw std::invalid_argument("variants must be nonempty");

  if (!j.contains("grid") || !j.at("grid").is_array() || j.at("grid").empty()) {
    throw std::invalid_argument("grid must be a nonempty array of hyperparameters");
  }
  for (const auto& g : j.at("grid")) cfg.grid.push_back(HyperParams::FromJson(g));

  if (j.contains("sigma")) cfg.sigma = j.at("sigma").get<double>();
  if (j.contains("target")) {
    PrivacyTarget t{j.at("target").at("epsilon").get<double>(),
                    j.at("target").at("delta").get<double>()};
    t.Validate();
    cfg.target = t;
  }
  if (cfg.sigma.has_value() == cfg.target.has_value()) {
    throw std::invalid_argument("provide exactly one of 'sigma' or 'target'");
  }
  cfg.delta = j.value("delta", 1e-5);
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw std::invalid_argument("delta out of (0, 1)");
  cfg.warm_start = j.value("warm_start", false);
  return cfg;
}

std::string FormatG(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

int RunSimulate(const SimulateOptions& opts) {
  if (opts.replications < 1) {
    std::cerr << "simulate: --replications must be >= 1\n";
    return kExitConfig;
  }
  std::ifstream f(opts.config_path);
  if (!f) {
    std::cerr << "simulate: cannot read " << opts.config_path << "\n";
    return kExitConfig;
  }
  SimulateConfig cfg;
  try {
    cfg = ParseConfig(nlohmann::json::parse(f));
  } catch (const std::exception& e) {
    std::cerr << "simulate: config violation: " << e.what() << "\n";
    return kExitConfig;
  }

  fs::create_directories(opts.out_dir);
  Dataset data = MakeTask(cfg.task);
  CandidatePool pool = BuildCandidatePool(cfg.grid, cfg.sigma, cfg.target);

  // The candidate-training mechanism, for the record: the first grid
  // entry's forward spec (grids with one (gamma, steps) pair are the common
  // case; the accounting itself always uses the pool's uniform bound).
  MechanismSpec base = MechanismSpec::Composed(
      MechanismSpec::SubsampledGaussian(pool.sigmas[0], pool.params[0].gamma),
      pool.params[0].steps);

  std::map<TuningVariant, std::vector<ExperimentReport>> by_variant;
  std::ofstream trials_csv(fs::path(opts.out_dir) / "trials.csv", std::ios::binary);
  trials_csv << "replication,variant,trial,eta,clip,gamma,steps,optimizer,sigma,score,seed,"
                "steps_run,gradient_evals\n";

  for (int rep = 0; rep < opts.replications; ++rep) {
    // Stream k per replication; variants get disjoint substreams so one
    // variant's draws never shift another's.
    const std::uint64_t rep_seed = SplitRng(opts.seed).Split(1000 + rep).seed();
    for (std::size_t vi = 0; vi < cfg.variants.size(); ++vi) {
      TuningVariant variant = cfg.variants[vi];
      TuningConfig tc{cfg.mu, cfg.q, variant, base};
      ExperimentReport report = RunTuning(
          data, tc, pool, cfg.delta, SplitRng(rep_seed).Split(vi).seed(), cfg.warm_start);
      char name[128];
      std::snprintf(name, sizeof(name), "replication_%03d_%s.json", rep,
                    ToString(variant).c_str());
      std::ofstream rf(fs::path(opts.out_dir) / name, std::ios::binary);
      rf << report.ToJson().dump(2) << "\n";

      for (std::size_t t = 0; t < report.trials.size(); ++t) {
        const TrialRecord& r = report.trials[t];
        trials_csv << rep << "," << ToString(variant) << "," << t << "," << FormatG(r.params.eta)
                   << "," << FormatG(r.params.clip) << "," << FormatG(r.params.gamma) << ","
                   << r.params.steps << "," << ToString(r.params.optimizer) << ","
                   << FormatG(r.sigma) << "," << FormatG(r.score) << "," << r.seed << ","
                   << r.steps_run << "," << r.gradient_evals << "\n";
      }
      by_variant[variant].push_back(std::move(report));
    }
  }
  trials_csv.close();

  // Aggregate: mean score with the standard error of the mean.
  std::ofstream agg(fs::path(opts.out_dir) / "aggregate.csv", std::ios::binary);
  agg << "variant,replications,mean_score,std_error,final_epsilon,mean_actual_gradient_evals,"
         "expected_cost\n";
  svg::PlotSpec plot;
  plot.title = "Score vs privacy cost (" + std::to_string(opts.replications) + " replications)";
  plot.x_label = "epsilon at delta = " + FormatG(cfg.delta);
  plot.y_label = "mean test accuracy";
  const std::map<TuningVariant, std::string> colors = {
      {TuningVariant::kBaseline, "#2ca02c"},
      {TuningVariant::kVariant1, "#1f77b4"},
      {TuningVariant::kVariant2, "#ff7f0e"},
  };
  for (TuningVariant variant : cfg.variants) {
    const auto& reports = by_variant[variant];
    const double n = static_cast<double>(reports.size());
    double mean = 0.0, evals = 0.0;
    for (const auto& r : reports) {
      mean += r.final_score;
      evals += r.actual_gradient_evals;
    }
    mean /= n;
    evals /= n;
    double var = 0.0;
    for (const auto& r : reports) var += (r.final_score - mean) * (r.final_score - mean);
    const double std_error = n > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
    agg << ToString(variant) << "," << reports.size() << "," << FormatG(mean) << ","
        << FormatG(std_error) << "," << FormatG(reports.front().final_epsilon) << ","
        << FormatG(evals) << "," << FormatG(reports.front().expected_cost) << "\n";
    svg::Series s{ToString(variant), colors.at(variant), false, true, {}};
    s.points.push_back({reports.front().final_epsilon, mean, std_error});
    plot.series.push_back(std::move(s));
  }
  agg.close();
  svg::WriteFile((fs::path(opts.out_dir) / "score_vs_epsilon.svg").string(), plot);

  std::printf("wrote %d replication(s) x %zu variant(s) to %s\n", opts.replications,
              cfg.variants.size(), opts.out_dir.c_str());
  return kExitOk;
}

}  // namespace dptune::cli
