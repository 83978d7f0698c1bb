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

#include <span>
#include <stdexcept>
#include <vector>

// Brute-force Renyi divergences of one-dimensional Gaussian mixtures by
// numerical quadrature. This is the validation oracle for the subsampling
// bound and for the uniform-candidate mixture property; it never feeds the
// accounting path.
namespace dptune {

class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct GaussianComponent {
  double weight = 1.0;
  double mean = 0.0;
  double sigma = 1.0;
};

using GaussianMixture = std::vector<GaussianComponent>;

enum class QuadratureRule { kSimpson, kGaussLegendre };

// D_alpha(P || Q) = 1/(alpha-1) log \int P(t)^alpha Q(t)^(1-alpha) dt for
// Gaussian mixtures P and Q, alpha > 1. The integrand is evaluated in log
// space; the integration window is located by a coarse scan and trimmed
// where the log-integrand drops 80 nats below its peak (relative truncation
// error < 1e-12), then integrated with `intervals` composite cells of the
// chosen rule.
double RenyiDivergence(const GaussianMixture& p, const GaussianMixture& q, double alpha,
                       QuadratureRule rule, std::size_t intervals = 40000);

// Exact one-step subsampled-Gaussian Renyi divergence under add/remove
// adjacency: the max of D_alpha(P||Q) and D_alpha(Q||P) for
// P = gamma N(1, sigma^2) + (1-gamma) N(0, sigma^2), Q = N(0, sigma^2).
// Each direction is computed with both quadrature rules and with a doubled
// node count; throws NonConvergenceError if any pair of refinements
// disagrees by more than 1e-9 relative.
double RenyiQuadratureOracle(double sigma, double gamma, double alpha);

}  // namespace dptune
