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
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace dptune::cli;

  CLI::App app{"dptune: Renyi-DP accounting, calibration, and tuning simulation"};
  app.require_subcommand(1);

  AccountOptions account;
  CLI::App* cmd_account = app.add_subcommand("account", "Print the RDP curve of a mechanism");
  cmd_account->add_option("--mechanism", account.mechanism, "gaussian | subsampled")
      ->check(CLI::IsMember({"gaussian", "subsampled"}));
  cmd_account->add_option("--sigma", account.sigma, "noise multiplier")->required();
  cmd_account->add_option("--gamma", account.gamma, "Poisson subsampling ratio");
  cmd_account->add_option("--sensitivity", account.sensitivity, "L2 sensitivity (gaussian)");
  cmd_account->add_option("--steps", account.steps, "composition length T");
  cmd_account->add_option("--delta", account.delta, "delta for conversion")->required();
  cmd_account->add_option("--alpha-max", account.alpha_max, "largest integer order");
  cmd_account->add_option("--csv", account.csv_path, "write the curve as CSV");
  cmd_account->add_option("--json", account.json_path, "write the curve as JSON");

  CalibrateOptions calibrate;
  CLI::App* cmd_calibrate =
      app.add_subcommand("calibrate", "Solve for sigma or T meeting a privacy target");
  cmd_calibrate->add_option("--target-eps", calibrate.target_eps, "target epsilon");
  cmd_calibrate->add_option("--delta", calibrate.delta, "target delta");
  cmd_calibrate->add_option("--gamma", calibrate.gamma, "Poisson subsampling ratio");
  cmd_calibrate->add_option("--steps", calibrate.steps, "fixed T (solves sigma)");
  cmd_calibrate->add_option("--sigma", calibrate.sigma, "fixed sigma (solves T)");
  cmd_calibrate->add_option("--alpha-line", calibrate.alpha_line,
                            "slope c of the alpha-line bound (solves sigma)");
  cmd_calibrate->add_option("--grid", calibrate.grid_path,
                            "JSON grid of {gamma, epochs, n} for the uniform bound");
  cmd_calibrate->add_option("--csv", calibrate.csv_path, "write the calibration report CSV");

  CompareVariantsOptions compare;
  CLI::App* cmd_compare = app.add_subcommand(
      "compare-variants", "Baseline / variant-1 / variant-2 bounds as a function of q");
  cmd_compare->add_option("--gamma", compare.gamma, "DP-SGD subsampling ratio")->required();
  cmd_compare->add_option("--sigma", compare.sigma, "DP-SGD noise multiplier")->required();
  cmd_compare->add_option("--epochs", compare.epochs, "training epochs (T = epochs/gamma)")
      ->required();
  cmd_compare->add_option("--mu", compare.mu, "expected candidate count")->required();
  cmd_compare->add_option("--delta", compare.delta, "delta for conversion");
  cmd_compare->add_option("--q-grid", compare.q_grid, "start:stop:step or comma list");
  cmd_compare->add_option("--csv", compare.csv_path, "output CSV path");
  cmd_compare->add_option("--svg", compare.svg_path, "output SVG path");

  SimulateOptions simulate;
  CLI::App* cmd_simulate =
      app.add_subcommand("simulate", "Run the tuning pipelines on a synthetic task");
  cmd_simulate->add_option("--config", simulate.config_path, "experiment config JSON")
      ->required();
  cmd_simulate->add_option("--replications", simulate.replications, "independent replications")
      ->required();
  cmd_simulate->add_option("--seed", simulate.seed, "root seed");
  cmd_simulate->add_option("--out", simulate.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*cmd_account) return RunAccount(account);
    if (*cmd_calibrate) return RunCalibrate(calibrate);
    if (*cmd_compare) return RunCompareVariants(compare);
    if (*cmd_simulate) return RunSimulate(simulate);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
