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
#include "dptune/extrapolation.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dptune {

std::string ToString(Optimizer o) { return o == Optimizer::kSgd ? "sgd" : "adam"; }

Optimizer OptimizerFromString(const std::string& s) {
  if (s == "sgd") return Optimizer::kSgd;
  if (s == "adam") return Optimizer::kAdam;
  throw std::invalid_argument("unknown optimizer: " + s);
}

void HyperParams::Validate() const {
  // eta = 0 is allowed: a zero-rate training run is a well-defined (if
  // useless) tuning candidate.
  if (!(eta >= 0.0)) throw std::invalid_argument("eta must be >= 0");
  if (!(clip > 0.0)) throw std::invalid_argument("clip must be > 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
}

nlohmann::json HyperParams::ToJson() const {
  return {{"eta", eta},
          {"clip", clip},
          {"gamma", gamma},
          {"steps", steps},
          {"optimizer", ToString(optimizer)}};
}

HyperParams HyperParams::FromJson(const nlohmann::json& j) {
  HyperParams p;
  p.eta = j.at("eta").get<double>();
  p.clip = j.at("clip").get<double>();
  p.gamma = j.at("gamma").get<double>();
  p.steps = j.at("steps").get<long>();
  p.optimizer = OptimizerFromString(j.value("optimizer", "sgd"));
  p.Validate();
  return p;
}

HyperParams Extrapolate(const HyperParams& params, double m, double n) {
  if (!(m >= 1.0) || !(n >= 1.0)) throw std::invalid_argument("m and n must be >= 1");
  HyperParams out = params;
  if (params.optimizer == Optimizer::kSgd) {
    out.eta = params.eta * n / m;
  }
  return out;
}

double OptimalLrEstimate(double gamma, double n, double sigma, double clip) {
  if (!(gamma > 0.0) || !(n > 0.0) || !(sigma > 0.0) || !(clip > 0.0)) {
    throw std::invalid_argument("all inputs must be positive");
  }
  return 2.0 * gamma * gamma * n / (sigma * sigma * clip * clip);
}

double InjectedNoiseVariance(double eta, double sigma, double clip, double gamma, double n,
                             long steps) {
  if (!(eta >= 0.0) || !(sigma >= 0.0) || !(clip > 0.0) || !(gamma > 0.0) || !(n > 0.0) ||
      steps < 0) {
    throw std::invalid_argument("inputs out of domain");
  }
  const double scale = eta * sigma * clip / (gamma * n);
  return static_cast<double>(steps) * scale * scale;
}

}  // namespace dptune
