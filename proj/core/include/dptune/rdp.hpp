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

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include <nlohmann/json_fwd.hpp>

// Foundational Renyi-DP types and operations: the order grid, RDP curves,
// the Gaussian mechanism, composition, parallel composition, and conversion
// between RDP and approximate DP.
//
// All operations are pure functions of immutable inputs; values are safe to
// share between threads.
namespace dptune {

// Thrown when a curve is asked for a Renyi order its grid does not contain.
class MissingOrderError : public std::runtime_error {
 public:
  explicit MissingOrderError(double alpha);
};

// Thrown when two curves defined on different grids are combined.
class GridMismatchError : public std::runtime_error {
 public:
  GridMismatchError();
};

// An ordered list of Renyi orders alpha > 1. The integer-valued entries are
// the only ones usable by the binomial-expansion bounds (subsampling and the
// tailored tuning bound are stated for integer alpha >= 2); fractional
// entries tighten the RDP -> approximate-DP conversion for small epsilon.
class AlphaGrid {
 public:
  // Validates: strictly increasing, every order > 1, and at least one
  // integer order >= 2. Throws std::invalid_argument otherwise.
  explicit AlphaGrid(std::vector<double> orders);

  // Integer orders 2..64 plus fractional orders {1.25, 1.5, 1.75}.
  static AlphaGrid Default();
  // Integer orders lo..hi inclusive.
  static AlphaGrid Integers(int lo, int hi);

  const std::vector<double>& orders() const { return orders_; }
  std::size_t size() const { return orders_.size(); }

  // Index of an exactly matching order, or npos.
  static constexpr std::size_t kNpos = static_cast<std::size_t>(-1);
  std::size_t IndexOf(double alpha) const;
  bool Contains(double alpha) const { return IndexOf(alpha) != kNpos; }

  // True when alpha is an integer >= 2 (usable by the integer-order bounds).
  static bool IsIntegerOrder(double alpha);
  // Largest integer order in the grid.
  int MaxIntegerOrder() const;
  // True when the grid contains every integer order 2..alpha.
  bool HasIntegerRange(int alpha) const;

  bool operator==(const AlphaGrid& other) const { return orders_ == other.orders_; }

 private:
  std::vector<double> orders_;
};

// A map from Renyi order alpha to a bound eps(alpha), in nats. +infinity is
// an explicit sentinel meaning "no bound at this order" and propagates
// through composition, maxima and conversion.
class RdpCurve {
 public:
  // Validates: one eps per order, every eps >= 0 (or +inf).
  RdpCurve(AlphaGrid grid, std::vector<double> eps);

  static RdpCurve Zero(AlphaGrid grid);

  const AlphaGrid& grid() const { return grid_; }
  const std::vector<double>& eps() const { return eps_; }

  // Bound at an order; throws MissingOrderError if the grid lacks it.
  double At(double alpha) const;
  bool FiniteAt(double alpha) const;
  // True when the curve is finite at every integer order 2..alpha.
  bool FiniteOnIntegerRange(int alpha) const;

  bool operator==(const RdpCurve& other) const {
    return grid_ == other.grid_ && eps_ == other.eps_;
  }

  // {"orders": [...], "eps": [...]}; infinite entries encode as "inf".
  nlohmann::json ToJson() const;
  static RdpCurve FromJson(const nlohmann::json& j);
  // CSV with header alpha,eps.
  void WriteCsv(std::ostream& out) const;

 private:
  AlphaGrid grid_;
  std::vector<double> eps_;
};

// An approximate-DP target or report: epsilon >= 0 nats, delta in (0,1).
struct PrivacyTarget {
  double epsilon = 0.0;
  double delta = 1e-5;

  // Throws std::invalid_argument when out of domain.
  void Validate() const;
};

// RDP bound of the Gaussian mechanism with L2-sensitivity `sensitivity` and
// noise level sigma: eps(alpha) = alpha * sensitivity^2 / (2 sigma^2).
// Throws std::domain_error for sigma <= 0 or alpha <= 1.
double GaussianEpsilon(double sigma, double sensitivity, double alpha);

// The Gaussian curve over a whole grid.
RdpCurve GaussianCurve(double sigma, double sensitivity, const AlphaGrid& grid);

// steps-fold adaptive composition: pointwise steps * eps(alpha).
RdpCurve Compose(const RdpCurve& curve, long steps);

// Pointwise sum of two curves on the same grid (composition of two different
// mechanisms). Throws GridMismatchError.
RdpCurve Add(const RdpCurve& a, const RdpCurve& b);

// Parallel composition over disjoint data shards: pointwise maximum.
// Throws GridMismatchError unless all curves share one grid.
RdpCurve ParallelCompose(std::span<const RdpCurve> curves);

// Uniform candidate bound over a hyperparameter grid: also the pointwise
// maximum, kept as a distinct named operation because its role (the uniform
// eps(alpha) fed to the tuning bound) differs from sharding.
RdpCurve UniformGridBound(std::span<const RdpCurve> curves);

struct EpsilonBound {
  double epsilon = 0.0;
  // Order attaining the minimum; NaN when no order yields a valid bound.
  double order = 0.0;
};

struct DeltaBound {
  double delta = 1.0;
  double order = 0.0;
};

// Converts an RDP curve to an epsilon bound at fixed delta by inverting
//   delta(eps) = exp((alpha-1)(eps' - eps)) / alpha * (1 - 1/alpha)^(alpha-1)
// per order and minimizing: eps = eps' + log(1/delta)/(alpha-1)
// - log(alpha)/(alpha-1) + log(1 - 1/alpha), clamped at 0.
//
// A curve carrying eps(alpha) = 0 at any order certifies identical output
// distributions (the order-alpha Renyi divergence vanishes only for equal
// distributions), so the conversion returns exactly 0 in that case.
// Returns a +inf sentinel when every order yields an invalid bound.
EpsilonBound RdpToDp(const RdpCurve& curve, double delta);

// Forward direction of the same conversion: the smallest delta(eps) over
// orders, clamped to [0, 1]. The zero-divergence rule above applies.
DeltaBound RdpToDelta(const RdpCurve& curve, double epsilon);

}  // namespace dptune
