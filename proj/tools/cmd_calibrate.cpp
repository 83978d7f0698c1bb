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
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "dptune/calibration.hpp"

namespace dptune::cli {

int RunCalibrate(const CalibrateOptions& opts) {
  const bool solve_sigma = opts.steps > 0 && opts.sigma <= 0.0 && opts.alpha_line <= 0.0;
  const bool solve_steps = opts.sigma > 0.0 && opts.steps <= 0 && opts.alpha_line <= 0.0;
  const bool alpha_line = opts.alpha_line > 0.0;
  const bool grid_mode = !opts.grid_path.empty();
  const int modes = static_cast<int>(solve_sigma) + static_cast<int>(solve_steps) +
                    static_cast<int>(alpha_line) + static_cast<int>(grid_mode);
  if (modes != 1) {
    std::cerr << "calibrate: pass exactly one of --steps (solve sigma), --sigma (solve steps), "
                 "--alpha-line C (with --steps), or --grid FILE\n";
    return kExitUsage;
  }

  const PrivacyTarget target{opts.target_eps, opts.delta};
  try {
    if (solve_sigma) {
      double sigma = CalibrateSigma(opts.gamma, opts.steps, target);
      double check = ForwardEpsilon(sigma, opts.gamma, opts.steps, opts.delta);
      double perturbed = ForwardEpsilon(sigma * (1.0 - 1e-3), opts.gamma, opts.steps, opts.delta);
      std::printf("sigma = %.10g\n", sigma);
      std::printf("verify: eps(sigma) = %.10g <= %.10g; eps(sigma*(1-1e-3)) = %.10g %s\n",
                  check, opts.target_eps, perturbed,
                  perturbed > opts.target_eps ? "> target (minimal)" : "(at bracket floor)");
    } else if (solve_steps) {
      long steps = CalibrateSteps(opts.gamma, opts.sigma, target);
      if (steps == 0) {
        std::printf("steps = 0 (target unreachable even at T = 1)\n");
        return kExitOk;
      }
      double check = ForwardEpsilon(opts.sigma, opts.gamma, steps, opts.delta);
      double next = ForwardEpsilon(opts.sigma, opts.gamma, steps + 1, opts.delta);
      std::printf("steps = %ld\n", steps);
      std::printf("verify: eps(T) = %.10g <= %.10g < eps(T+1) = %.10g\n", check,
                  opts.target_eps, next);
    } else if (alpha_line) {
      if (opts.steps <= 0) {
        std::cerr << "calibrate: --alpha-line requires --steps\n";
        return kExitUsage;
      }
      double sigma = CalibrateSigmaAlphaLine(opts.gamma, opts.steps, opts.alpha_line);
      std::printf("sigma = %.10g\n", sigma);
      std::printf("verify: T*eps(alpha) <= %.6g*alpha holds for all integer orders\n",
                  opts.alpha_line);
    } else {
      std::ifstream f(opts.grid_path);
      if (!f) {
        std::cerr << "calibrate: cannot read " << opts.grid_path << "\n";
        return kExitUsage;
      }
      nlohmann::json j = nlohmann::json::parse(f);
      std::vector<GridEntry> entries = GridEntriesFromJson(j);
      GridCalibration result = GridUniformCurve(entries, target);
      std::ostringstream csv;
      WriteCalibrationCsv(csv, entries, result, target);
      std::fputs(csv.str().c_str(), stdout);
      EpsilonBound uniform_eps = RdpToDp(result.uniform, opts.delta);
      std::printf("uniform candidate bound: eps = %.10g at delta = %g (alpha = %g)\n",
                  uniform_eps.epsilon, opts.delta, uniform_eps.order);
      if (!opts.csv_path.empty()) {
        std::ofstream out(opts.csv_path, std::ios::binary);
        if (!out) {
          std::cerr << "calibrate: cannot write " << opts.csv_path << "\n";
          return kExitUsage;
        }
        out << csv.str();
      }
    }
  } catch (const NoSolutionError& e) {
    std::cerr << "calibrate: " << e.what() << "\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

}  // namespace dptune::cli
