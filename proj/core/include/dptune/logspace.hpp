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

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

// Log-space primitives shared by the binomial-expansion bounds. Everything
// that sums exponentials of privacy parameters goes through LogSumExp so that
// orders up to alpha=64 and ratios down to 1e-4 stay finite.
namespace dptune::logspace {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// log(sum_i exp(args[i])). Any +inf argument dominates; -inf arguments drop
// out; an all -inf (or empty) input yields -inf.
inline double LogSumExp(std::span<const double> args) {
  double max_arg = -kInf;
  for (double a : args) {
    if (std::isnan(a)) return a;
    max_arg = std::max(max_arg, a);
  }
  if (max_arg == kInf || max_arg == -kInf) return max_arg;
  double sum = 0.0;
  for (double a : args) {
    if (a != -kInf) sum += std::exp(a - max_arg);
  }
  return max_arg + std::log(sum);
}

// log of the binomial coefficient C(n, k) via lgamma. C(64, 32) overflows
// 64-bit integers, so factorials are never formed.
inline double LogBinom(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// k * log_base with the x^0 = 1 convention: a zero exponent yields exactly 0
// even when log_base is -inf (e.g. (1-gamma)^0 at gamma=1).
inline double LogPow(double k, double log_base) {
  return k == 0.0 ? 0.0 : k * log_base;
}

// k * eps with the same convention for privacy-parameter exponents: a zero
// exponent never reads eps, so 0 * eps(1) = 0 and 0 * inf = 0.
inline double ExpWeight(double k, double eps) {
  return k == 0.0 ? 0.0 : k * eps;
}

}  // namespace dptune::logspace
