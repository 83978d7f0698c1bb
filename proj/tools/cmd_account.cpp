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
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "dptune/mechanism.hpp"

namespace dptune::cli {

int RunAccount(const AccountOptions& opts) {
  if (opts.mechanism != "gaussian" && opts.mechanism != "subsampled") {
    std::cerr << "account: --mechanism must be 'gaussian' or 'subsampled'\n";
    return kExitUsage;
  }
  if (opts.alpha_max < 2) {
    std::cerr << "account: --alpha-max must be >= 2\n";
    return kExitUsage;
  }

  std::vector<double> orders = {1.25, 1.5, 1.75};
  for (int a = 2; a <= opts.alpha_max; ++a) orders.push_back(a);
  AlphaGrid grid(std::move(orders));

  MechanismSpec step = opts.mechanism == "gaussian"
                           ? MechanismSpec::Gaussian(opts.sigma, opts.sensitivity)
                           : MechanismSpec::SubsampledGaussian(opts.sigma, opts.gamma);
  MechanismSpec mech = opts.steps > 1 ? MechanismSpec::Composed(step, opts.steps) : step;
  RdpCurve curve = mech.Curve(grid);

  std::printf("RDP curve (%s, sigma=%g%s, steps=%ld):\n", opts.mechanism.c_str(), opts.sigma,
              opts.mechanism == "subsampled"
                  ? (", gamma=" + std::to_string(opts.gamma)).c_str()
                  : "",
              opts.steps);
  std::printf("%10s  %-22s\n", "alpha", "eps");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::isinf(curve.eps()[i])) {
      std::printf("%10g  %-22s\n", grid.orders()[i], "inf");
    } else {
      std::printf("%10g  %-22.12g\n", grid.orders()[i], curve.eps()[i]);
    }
  }
  EpsilonBound bound = RdpToDp(curve, opts.delta);
  if (std::isinf(bound.epsilon)) {
    std::printf("converted: eps = inf at delta = %g (no usable order)\n", opts.delta);
  } else {
    std::printf("converted: eps = %.12g at delta = %g (attained at alpha = %g)\n",
                bound.epsilon, opts.delta, bound.order);
  }

  if (!opts.csv_path.empty()) {
    std::ofstream f(opts.csv_path, std::ios::binary);
    if (!f) {
      std::cerr << "account: cannot write " << opts.csv_path << "\n";
      return kExitUsage;
    }
    curve.WriteCsv(f);
  }
  if (!opts.json_path.empty()) {
    std::ofstream f(opts.json_path, std::ios::binary);
    if (!f) {
      std::cerr << "account: cannot write " << opts.json_path << "\n";
      return kExitUsage;
    }
    f << curve.ToJson().dump(2) << "\n";
  }
  return kExitOk;
}

}  // namespace dptune::cli
