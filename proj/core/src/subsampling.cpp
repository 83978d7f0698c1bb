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
#include "dptune/subsampling.hpp"

#include <cmath>
#include <vector>

#include "dptune/logspace.hpp"

namespace dptune {

using logspace::ExpWeight;
using logspace::kInf;
using logspace::LogBinom;
using logspace::LogPow;
using logspace::LogSumExp;

double SubsampleRdp(const RdpCurve& base, double gamma, int alpha) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("gamma must lie in [0, 1]");
  if (alpha < 2) throw std::domain_error("alpha must be an integer >= 2");
  // Validate the required orders up front so a missing order surfaces as an
  // error rather than being masked by the gamma = 0 shortcut.
  for (int j = 2; j <= alpha; ++j) base.At(static_cast<double>(j));
  if (gamma == 0.0) return 0.0;  // empty subsample, identical distributions

  const double a = static_cast<double>(alpha);
  const double log_g = std::log(gamma);
  const double log_1mg = gamma < 1.0 ? std::log1p(-gamma) : -kInf;

  // A vanishing coefficient (log = -inf) zeroes its term outright, so an
  // infinite eps behind it never produces 0 * inf.
  const auto term = [](double log_coef, double weighted_eps) {
    return log_coef == -kInf ? -kInf : log_coef + weighted_eps;
  };

  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(alpha));
  terms.push_back(LogPow(a - 1.0, log_1mg) + std::log(a * gamma - gamma + 1.0));
  terms.push_back(term(LogBinom(a, 2.0) + 2.0 * log_g + LogPow(a - 2.0, log_1mg),
                       base.At(2.0)));
  for (int j = 3; j <= alpha; ++j) {
    const double dj = static_cast<double>(j);
    terms.push_back(term(std::log(3.0) + LogBinom(a, dj) + dj * log_g +
                             LogPow(a - dj, log_1mg),
                         ExpWeight(dj - 1.0, base.At(dj))));
  }
  // The exact sum is >= 1, but cancellation between the first term and
  // log(1 + ...) can land a hair below zero at extreme gamma; a divergence
  // bound is never negative.
  return std::max(LogSumExp(terms) / (a - 1.0), 0.0);
}

RdpCurve SubsampleCurve(const RdpCurve& base, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("gamma must lie in [0, 1]");
  std::vector<double> eps;
  eps.reserve(base.grid().size());
  for (double a : base.grid().orders()) {
    if (!AlphaGrid::IsIntegerOrder(a)) {
      eps.push_back(kInf);
      continue;
    }
    eps.push_back(SubsampleRdp(base, gamma, static_cast<int>(a)));
  }
  return RdpCurve(base.grid(), std::move(eps));
}

}  // namespace dptune
