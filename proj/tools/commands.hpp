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
#include <string>

namespace dptune::cli {

// Exit codes: 0 ok, 2 usage, 3 infeasible target, 4 config violation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitConfig = 4;

struct AccountOptions {
  std::string mechanism = "gaussian";  // gaussian | subsampled
  double sigma = 1.0;
  double gamma = 0.01;
  double sensitivity = 1.0;
  long steps = 1;
  double delta = 1e-5;
  int alpha_max = 64;
  std::string csv_path;   // optional curve CSV export
  std::string json_path;  // optional curve JSON export
};
int RunAccount(const AccountOptions& opts);

struct CalibrateOptions {
  double target_eps = 1.0;
  double delta = 1e-5;
  double gamma = 0.01;
  long steps = 0;          // > 0: solve sigma for fixed steps
  double sigma = 0.0;      // > 0: solve steps for fixed sigma
  double alpha_line = 0.0; // > 0: solve sigma for the alpha-line bound
  std::string grid_path;   // JSON grid for the uniform candidate bound
  std::string csv_path;    // calibration report CSV
};
int RunCalibrate(const CalibrateOptions& opts);

struct CompareVariantsOptions {
  double gamma = 0.01;
  double sigma = 2.0;
  double epochs = 50.0;
  double mu = 15.0;
  double delta = 1e-5;
  std::string q_grid = "0.05:0.5:0.05";  // start:stop:step or comma list
  std::string csv_path = "compare_variants.csv";
  std::string svg_path = "compare_variants.svg";
};
int RunCompareVariants(const CompareVariantsOptions& opts);

struct SimulateOptions {
  std::string config_path;
  int replications = 1;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};
int RunSimulate(const SimulateOptions& opts);

}  // namespace dptune::cli
