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

#include "dptune/mechanism.hpp"
#include "dptune/rdp.hpp"

// Privacy bounds for hyperparameter tuning with a Poisson-randomized number
// of candidate evaluations, and the compute-cost model of the three
// pipelines:
//
//   baseline   tune on the full dataset, return the best candidate model;
//   variant 1  tune on a Poisson-q subset X1, train the final model on the
//              complement X \ X1 (tailored two-sided bound);
//   variant 2  tune on X1, train the final model on all of X (subsampled
//              amplification of the tuning mechanism, then composition).
namespace dptune {

enum class TuningVariant { kBaseline, kVariant1, kVariant2 };

std::string ToString(TuningVariant v);
TuningVariant TuningVariantFromString(const std::string& s);

// Poisson tuning configuration: mu is the expected number of candidate
// evaluations, q the tuning-subset ratio, base the candidate-training
// mechanism.
struct TuningConfig {
  double mu = 1.0;
  double q = 0.1;
  TuningVariant variant = TuningVariant::kBaseline;
  MechanismSpec base = MechanismSpec::Gaussian(1.0);

  void Validate() const;
};

// RDP curve of Poisson-count random search over a candidate mechanism with
// curve `base`: at each order,
//
//   eps'(alpha) = eps(alpha) + mu * delta_hat(alpha) + log(mu) / (alpha - 1)
//
// where the candidate's approximate-DP pair is taken at the validity
// boundary eps_hat(alpha) = log(1 + 1/(alpha-1)) and
// delta_hat(alpha) = RdpToDelta(base, eps_hat(alpha)). Maximizing eps_hat
// minimizes delta_hat, and the mu * delta_hat term dominates. Orders where
// delta_hat >= 1 (or the base is unbounded) carry the +inf sentinel.
RdpCurve TuningRdp(const RdpCurve& base, double mu);

// Tailored bound for variant 1 at integer order alpha >= 2, given the
// tuning mechanism's curve eps1 and the final-training mechanism's curve
// eps2. Evaluates both directed bounds
//
//   D(M(Y)||M(X)) <= 1/(a-1) log( q^a e^{(a-1) eps1(a)}
//                   + (1-q)^a e^{(a-1) eps2(a)}
//                   + sum_{j=1}^{a-1} C(a,j) q^(a-j) (1-q)^j
//                       e^{(a-j-1) eps1(a-j)} e^{(j-1) eps2(j)} )
//   D(M(X)||M(Y)) <= 1/(a-1) log( (1-q)^(a-1) e^{(a-1) eps2(a)}
//                   + sum_{j=1}^{a-1} C(a-1,j) q^j (1-q)^(a-1-j)
//                       e^{j eps1(j+1)} e^{(a-j-1) eps2(a-j)} )
//
// in log space and returns the larger (symmetric RDP reporting). Exponents
// of the form 0 * eps(1) are evaluated as 0 without reading order 1.
double Variant1Rdp(const RdpCurve& eps1, const RdpCurve& eps2, double q, int alpha);

// Variant1Rdp applied per integer order; fractional orders carry the
// sentinel.
RdpCurve Variant1Curve(const RdpCurve& eps1, const RdpCurve& eps2, double q);

// Variant 2: amplify the tuning curve by Poisson-q subsampling, then compose
// with the final training: SubsampleCurve(tuning_curve, q) + base pointwise.
RdpCurve Variant2Curve(const RdpCurve& tuning_curve, const RdpCurve& base, double q);

// Expected gradient-evaluation counts for a dataset of size n trained E
// epochs with expected candidate count mu and subset ratio q:
//   baseline   mu * n * E
//   variant 1  (mu q n + (1-q) n) * E
//   variant 2  (mu q n + n) * E
struct CostModel {
  double n = 1.0;
  double epochs = 1.0;
  double mu = 1.0;
  double q = 0.1;

  void Validate() const;
};

struct CostEstimate {
  double gradient_evals = 0.0;
  double baseline_evals = 0.0;
  // baseline_evals / gradient_evals: how many times more work the baseline
  // does than the chosen variant.
  double baseline_ratio = 1.0;
};

CostEstimate ExpectedCost(const CostModel& model, TuningVariant variant);

}  // namespace dptune
