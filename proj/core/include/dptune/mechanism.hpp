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

#include <memory>

#include <nlohmann/json_fwd.hpp>

#include "dptune/rdp.hpp"

namespace dptune {

// Declarative description of a base mechanism from which RDP curves are
// derived:
//   Gaussian(sigma, sensitivity)      eps(alpha) = alpha sens^2 / (2 sigma^2)
//   SubsampledGaussian(sigma, gamma)  Poisson-subsampled Gaussian with unit
//                                     sensitivity (noise-multiplier form);
//                                     integer orders only, except gamma = 1
//                                     which is the plain Gaussian and gamma=0
//                                     which touches no data (zero curve).
//   Composed(inner, steps)            steps-fold composition of inner.
class MechanismSpec {
 public:
  static MechanismSpec Gaussian(double sigma, double sensitivity = 1.0);
  static MechanismSpec SubsampledGaussian(double sigma, double gamma);
  static MechanismSpec Composed(MechanismSpec inner, long steps);

  // The RDP curve of the mechanism over `grid`. Orders a subsampled
  // mechanism cannot bound (fractional alpha at 0 < gamma < 1) carry the
  // +inf sentinel.
  RdpCurve Curve(const AlphaGrid& grid) const;

  nlohmann::json ToJson() const;
  static MechanismSpec FromJson(const nlohmann::json& j);

  enum class Kind { kGaussian, kSubsampledGaussian, kComposed };
  Kind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  double sensitivity() const { return sensitivity_; }
  double gamma() const { return gamma_; }
  long steps() const { return steps_; }
  const MechanismSpec& inner() const { return *inner_; }

 private:
  MechanismSpec() = default;

  Kind kind_ = Kind::kGaussian;
  double sigma_ = 1.0;
  double sensitivity_ = 1.0;
  double gamma_ = 1.0;
  long steps_ = 1;
  std::shared_ptr<const MechanismSpec> inner_;
};

}  // namespace dptune
