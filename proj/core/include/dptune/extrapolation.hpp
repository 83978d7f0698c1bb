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

#include <string>

#include <nlohmann/json_fwd.hpp>

// Transfer rules for hyperparameters found on a tuning subset of size m to a
// training set of size n. The clipping constant, noise level, subsampling
// ratio and step count stay fixed, so the privacy accounting of the base
// mechanism is unchanged by the transfer; only the SGD learning rate scales.
namespace dptune {

enum class Optimizer { kSgd, kAdam };

std::string ToString(Optimizer o);
Optimizer OptimizerFromString(const std::string& s);

struct HyperParams {
  double eta = 0.1;      // learning rate
  double clip = 1.0;     // L2 clipping constant
  double gamma = 0.01;   // Poisson subsampling ratio; |B| = gamma * n on demand
  long steps = 1;        // iteration count T
  Optimizer optimizer = Optimizer::kSgd;

  void Validate() const;
  nlohmann::json ToJson() const;
  static HyperParams FromJson(const nlohmann::json& j);
};

// SGD scales eta by n/m; Adam keeps eta fixed; everything else is copied.
HyperParams Extrapolate(const HyperParams& params, double m, double n);

// Stationary-phase optimal learning rate when the DP noise dominates the
// minibatch noise: eta* = 2 |B|^2 / (n sigma^2 C^2) = 2 gamma^2 n / (sigma^2 C^2).
double OptimalLrEstimate(double gamma, double n, double sigma, double clip);

// Variance of the total noise injected over T steps of DP-SGD on a dataset
// of size n: T * eta^2 sigma^2 C^2 / (gamma n)^2. Invariant under
// Extrapolate for SGD, which is what makes the transfer privacy-neutral in
// distribution.
double InjectedNoiseVariance(double eta, double sigma, double clip, double gamma, double n,
                             long steps);

}  // namespace dptune
