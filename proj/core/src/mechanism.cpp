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
#include "dptune/mechanism.hpp"

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "dptune/subsampling.hpp"

namespace dptune {

MechanismSpec MechanismSpec::Gaussian(double sigma, double sensitivity) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  if (sensitivity < 0.0) throw std::invalid_argument("sensitivity must be >= 0");
  MechanismSpec m;
  m.kind_ = Kind::kGaussian;
  m.sigma_ = sigma;
  m.sensitivity_ = sensitivity;
  return m;
}

MechanismSpec MechanismSpec::SubsampledGaussian(double sigma, double gamma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
  MechanismSpec m;
  m.kind_ = Kind::kSubsampledGaussian;
  m.sigma_ = sigma;
  m.gamma_ = gamma;
  m.sensitivity_ = 1.0;
  return m;
}

MechanismSpec MechanismSpec::Composed(MechanismSpec inner, long steps) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  MechanismSpec m;
  m.kind_ = Kind::kComposed;
  m.steps_ = steps;
  m.inner_ = std::make_shared<const MechanismSpec>(std::move(inner));
  return m;
}

RdpCurve MechanismSpec::Curve(const AlphaGrid& grid) const {
  switch (kind_) {
    case Kind::kGaussian:
      return GaussianCurve(sigma_, sensitivity_, grid);
    case Kind::kSubsampledGaussian:
      // Poisson sampling with rate 1 includes every record, so the
      // mechanism is the plain Gaussian and its curve holds at all orders.
      if (gamma_ == 1.0) return GaussianCurve(sigma_, 1.0, grid);
      return SubsampleCurve(GaussianCurve(sigma_, 1.0, grid), gamma_);
    case Kind::kComposed:
      return Compose(inner_->Curve(grid), steps_);
  }
  throw std::logic_error("unreachable");
}

nlohmann::json MechanismSpec::ToJson() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::kGaussian:
      j["kind"] = "gaussian";
      j["sigma"] = sigma_;
      j["sensitivity"] = sensitivity_;
      break;
    case Kind::kSubsampledGaussian:
      j["kind"] = "subsampled_gaussian";
      j["sigma"] = sigma_;
      j["gamma"] = gamma_;
      break;
    case Kind::kComposed:
      j["kind"] = "composed";
      j["steps"] = steps_;
      j["inner"] = inner_->ToJson();
      break;
  }
  return j;
}

MechanismSpec MechanismSpec::FromJson(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "gaussian") {
    return Gaussian(j.at("sigma").get<double>(), j.value("sensitivity", 1.0));
  }
  if (kind == "subsampled_gaussian") {
    return SubsampledGaussian(j.at("sigma").get<double>(), j.at("gamma").get<double>());
  }
  if (kind == "composed") {
    return Composed(FromJson(j.at("inner")), j.at("steps").get<long>());
  }
  throw std::invalid_argument("unknown mechanism kind: " + kind);
}

}  // namespace dptune
