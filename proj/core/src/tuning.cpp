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
#include "dptune/tuning.hpp"

#include <cmath>
#include <vector>

#include "dptune/logspace.hpp"
#include "dptune/subsampling.hpp"

namespace dptune {

using logspace::ExpWeight;
using logspace::kInf;
using logspace::LogBinom;
using logspace::LogPow;
using logspace::LogSumExp;

std::string ToString(TuningVariant v) {
  switch (v) {
    case TuningVariant::kBaseline:
      return "baseline";
    case TuningVariant::kVariant1:
      return "variant1";
    case TuningVariant::kVariant2:
      return "variant2";
  }
  return "unknown";
}

TuningVariant TuningVariantFromString(const std::string& s) {
  if (s == "baseline") return TuningVariant::kBaseline;
  if (s == "variant1") return TuningVariant::kVariant1;
  if (s == "variant2") return TuningVariant::kVariant2;
  throw std::invalid_argument("unknown tuning variant: " + s);
}

void TuningConfig::Validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in [0, 1]");
}

RdpCurve TuningRdp(const RdpCurve& base, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
  const double log_mu = std::log(mu);
  std::vector<double> eps;
  eps.reserve(base.grid().size());
  for (std::size_t i = 0; i < base.grid().size(); ++i) {
    const double a = base.grid().orders()[i];
    const double e = base.eps()[i];
    if (std::isinf(e)) {
      eps.push_back(kInf);
      continue;
    }
    const double eps_hat = std::log1p(1.0 / (a - 1.0));
    const double delta_hat = RdpToDelta(base, eps_hat).delta;
    if (delta_hat >= 1.0) {
      eps.push_back(kInf);
      continue;
    }
    eps.push_back(std::max(e + mu * delta_hat + log_mu / (a - 1.0), 0.0));
  }
  return RdpCurve(base.grid(), std::move(eps));
}

namespace {

// A vanishing binomial coefficient (log = -inf) zeroes the term before the
// privacy weights are read, so q in {0,1} never meets an infinite eps.
double Term(double log_coef, double weighted_eps) {
  return log_coef == -kInf ? -kInf : log_coef + weighted_eps;
}

}  // namespace

double Variant1Rdp(const RdpCurve& eps1, const RdpCurve& eps2, double q, int alpha) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("q must lie in [0, 1]");
  if (alpha < 2) throw std::domain_error("alpha must be an integer >= 2");
  for (int j = 2; j <= alpha; ++j) {
    eps1.At(static_cast<double>(j));
    eps2.At(static_cast<double>(j));
  }

  const double a = static_cast<double>(alpha);
  const double log_q = q > 0.0 ? std::log(q) : -kInf;
  const double log_1mq = q < 1.0 ? std::log1p(-q) : -kInf;
  // Order-1 convention: exponent 0 never reads eps(1).
  const auto e1 = [&](int j) { return j >= 2 ? eps1.At(static_cast<double>(j)) : 0.0; };
  const auto e2 = [&](int j) { return j >= 2 ? eps2.At(static_cast<double>(j)) : 0.0; };

  // Direction D(M(Y) || M(X)).
  std::vector<double> fwd;
  fwd.reserve(static_cast<std::size_t>(alpha) + 1);
  fwd.push_back(Term(LogPow(a, log_q), ExpWeight(a - 1.0, e1(alpha))));
  fwd.push_back(Term(LogPow(a, log_1mq), ExpWeight(a - 1.0, e2(alpha))));
  for (int j = 1; j <= alpha - 1; ++j) {
    const double dj = static_cast<double>(j);
    fwd.push_back(Term(LogBinom(a, dj) + LogPow(a - dj, log_q) + LogPow(dj, log_1mq),
                       ExpWeight(a - dj - 1.0, e1(alpha - j)) + ExpWeight(dj - 1.0, e2(j))));
  }
  const double d_forward = LogSumExp(fwd) / (a - 1.0);

  // Direction D(M(X) || M(Y)).
  std::vector<double> rev;
  rev.reserve(static_cast<std::size_t>(alpha));
  rev.push_back(Term(LogPow(a - 1.0, log_1mq), ExpWeight(a - 1.0, e2(alpha))));
  for (int j = 1; j <= alpha - 1; ++j) {
    const double dj = static_cast<double>(j);
    rev.push_back(
        Term(LogBinom(a - 1.0, dj) + LogPow(dj, log_q) + LogPow(a - 1.0 - dj, log_1mq),
             ExpWeight(dj, e1(j + 1)) + ExpWeight(a - dj - 1.0, e2(alpha - j))));
  }
  const double d_reverse = LogSumExp(rev) / (a - 1.0);

  // Divergence bounds are never negative; rounding noise near q in {0,1}
  // with zero curves can land fractionally below.
  return std::max(std::max(d_forward, d_reverse), 0.0);
}

RdpCurve Variant1Curve(const RdpCurve& eps1, const RdpCurve& eps2, double q) {
  if (!(eps1.grid() == eps2.grid())) throw GridMismatchError();
  std::vector<double> eps;
  eps.reserve(eps1.grid().size());
  for (double a : eps1.grid().orders()) {
    if (!AlphaGrid::IsIntegerOrder(a)) {
      eps.push_back(kInf);
      continue;
    }
    eps.push_back(Variant1Rdp(eps1, eps2, q, static_cast<int>(a)));
  }
  return RdpCurve(eps1.grid(), std::move(eps));
}

RdpCurve Variant2Curve(const RdpCurve& tuning_curve, const RdpCurve& base, double q) {
  return Add(SubsampleCurve(tuning_curve, q), base);
}

void CostModel::Validate() const {
  if (!(n > 0.0) || !(epochs > 0.0) || !(mu > 0.0) || !(q > 0.0) || !(q <= 1.0)) {
    throw std::invalid_argument("cost model fields must be positive (and q <= 1)");
  }
}

CostEstimate ExpectedCost(const CostModel& model, TuningVariant variant) {
  model.Validate();
  const double baseline = model.mu * model.n * model.epochs;
  double evals = baseline;
  switch (variant) {
    case TuningVariant::kBaseline:
      break;
    case TuningVariant::kVariant1:
      evals = (model.mu * model.q * model.n + (1.0 - model.q) * model.n) * model.epochs;
      break;
    case TuningVariant::kVariant2:
      evals = (model.mu * model.q * model.n + model.n) * model.epochs;
      break;
  }
  return {evals, baseline, baseline / evals};
}

}  // namespace dptune
