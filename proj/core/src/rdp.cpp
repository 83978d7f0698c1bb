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
#include "dptune/rdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "dptune/logspace.hpp"

namespace dptune {

using logspace::kInf;

MissingOrderError::MissingOrderError(double alpha)
    : std::runtime_error("RDP curve does not contain order alpha=" + std::to_string(alpha)) {}

GridMismatchError::GridMismatchError()
    : std::runtime_error("curves are defined on different alpha grids") {}

AlphaGrid::AlphaGrid(std::vector<double> orders) : orders_(std::move(orders)) {
  if (orders_.empty()) throw std::invalid_argument("alpha grid must be nonempty");
  double prev = 1.0;
  bool has_integer = false;
  for (double a : orders_) {
    if (!(a > 1.0)) throw std::invalid_argument("every alpha must be > 1");
    if (!(a > prev)) throw std::invalid_argument("alpha grid must be strictly increasing");
    prev = a;
    has_integer = has_integer || IsIntegerOrder(a);
  }
  if (!has_integer) {
    throw std::invalid_argument("alpha grid must contain an integer order >= 2");
  }
}

AlphaGrid AlphaGrid::Default() {
  std::vector<double> orders = {1.25, 1.5, 1.75};
  for (int a = 2; a <= 64; ++a) orders.push_back(static_cast<double>(a));
  return AlphaGrid(std::move(orders));
}

AlphaGrid AlphaGrid::Integers(int lo, int hi) {
  std::vector<double> orders;
  for (int a = lo; a <= hi; ++a) orders.push_back(static_cast<double>(a));
  return AlphaGrid(std::move(orders));
}

std::size_t AlphaGrid::IndexOf(double alpha) const {
  auto it = std::lower_bound(orders_.begin(), orders_.end(), alpha);
  if (it != orders_.end() && *it == alpha) {
    return static_cast<std::size_t>(it - orders_.begin());
  }
  return kNpos;
}

bool AlphaGrid::IsIntegerOrder(double alpha) {
  return alpha >= 2.0 && std::floor(alpha) == alpha;
}

int AlphaGrid::MaxIntegerOrder() const {
  for (auto it = orders_.rbegin(); it != orders_.rend(); ++it) {
    if (IsIntegerOrder(*it)) return static_cast<int>(*it);
  }
  return 0;  // unreachable: the constructor guarantees one integer order
}

bool AlphaGrid::HasIntegerRange(int alpha) const {
  for (int j = 2; j <= alpha; ++j) {
    if (!Contains(static_cast<double>(j))) return false;
  }
  return true;
}

RdpCurve::RdpCurve(AlphaGrid grid, std::vector<double> eps)
    : grid_(std::move(grid)), eps_(std::move(eps)) {
  if (eps_.size() != grid_.size()) {
    throw std::invalid_argument("curve needs one eps per grid order");
  }
  for (double e : eps_) {
    if (std::isnan(e) || e < 0.0) {
      throw std::invalid_argument("every eps(alpha) must be >= 0 (or +inf)");
    }
  }
}

RdpCurve RdpCurve::Zero(AlphaGrid grid) {
  std::vector<double> eps(grid.size(), 0.0);
  return RdpCurve(std::move(grid), std::move(eps));
}

double RdpCurve::At(double alpha) const {
  std::size_t i = grid_.IndexOf(alpha);
  if (i == AlphaGrid::kNpos) throw MissingOrderError(alpha);
  return eps_[i];
}

bool RdpCurve::FiniteAt(double alpha) const { return std::isfinite(At(alpha)); }

bool RdpCurve::FiniteOnIntegerRange(int alpha) const {
  for (int j = 2; j <= alpha; ++j) {
    if (!FiniteAt(static_cast<double>(j))) return false;
  }
  return true;
}

nlohmann::json RdpCurve::ToJson() const {
  nlohmann::json j;
  j["orders"] = grid_.orders();
  nlohmann::json eps = nlohmann::json::array();
  for (double e : eps_) {
    if (std::isinf(e)) {
      eps.push_back("inf");
    } else {
      eps.push_back(e);
    }
  }
  j["eps"] = eps;
  return j;
}

RdpCurve RdpCurve::FromJson(const nlohmann::json& j) {
  std::vector<double> orders = j.at("orders").get<std::vector<double>>();
  std::vector<double> eps;
  for (const auto& e : j.at("eps")) {
    if (e.is_string()) {
      if (e.get<std::string>() != "inf") {
        throw std::invalid_argument("unrecognized eps entry: " + e.get<std::string>());
      }
      eps.push_back(kInf);
    } else if (e.is_null()) {
      eps.push_back(kInf);
    } else {
      eps.push_back(e.get<double>());
    }
  }
  return RdpCurve(AlphaGrid(std::move(orders)), std::move(eps));
}

void RdpCurve::WriteCsv(std::ostream& out) const {
  out << "alpha,eps\n";
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    out << grid_.orders()[i] << ",";
    if (std::isinf(eps_[i])) {
      out << "inf";
    } else {
      out << eps_[i];
    }
    out << "\n";
  }
}

void PrivacyTarget::Validate() const {
  if (std::isnan(epsilon) || epsilon < 0.0) {
    throw std::invalid_argument("target epsilon must be >= 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("target delta must lie in (0, 1)");
  }
}

double GaussianEpsilon(double sigma, double sensitivity, double alpha) {
  if (!(sigma > 0.0)) throw std::domain_error("sigma must be > 0");
  if (sensitivity < 0.0) throw std::domain_error("sensitivity must be >= 0");
  if (!(alpha > 1.0)) throw std::domain_error("alpha must be > 1");
  return alpha * sensitivity * sensitivity / (2.0 * sigma * sigma);
}

RdpCurve GaussianCurve(double sigma, double sensitivity, const AlphaGrid& grid) {
  std::vector<double> eps;
  eps.reserve(grid.size());
  for (double a : grid.orders()) eps.push_back(GaussianEpsilon(sigma, sensitivity, a));
  return RdpCurve(grid, std::move(eps));
}

RdpCurve Compose(const RdpCurve& curve, long steps) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  std::vector<double> eps;
  eps.reserve(curve.eps().size());
  for (double e : curve.eps()) eps.push_back(static_cast<double>(steps) * e);
  return RdpCurve(curve.grid(), std::move(eps));
}

RdpCurve Add(const RdpCurve& a, const RdpCurve& b) {
  if (!(a.grid() == b.grid())) throw GridMismatchError();
  std::vector<double> eps(a.eps().size());
  for (std::size_t i = 0; i < eps.size(); ++i) eps[i] = a.eps()[i] + b.eps()[i];
  return RdpCurve(a.grid(), std::move(eps));
}

RdpCurve ParallelCompose(std::span<const RdpCurve> curves) {
  if (curves.empty()) throw std::invalid_argument("need at least one curve");
  std::vector<double> eps = curves.front().eps();
  for (const RdpCurve& c : curves.subspan(1)) {
    if (!(c.grid() == curves.front().grid())) throw GridMismatchError();
    for (std::size_t i = 0; i < eps.size(); ++i) eps[i] = std::max(eps[i], c.eps()[i]);
  }
  return RdpCurve(curves.front().grid(), std::move(eps));
}

RdpCurve UniformGridBound(std::span<const RdpCurve> curves) {
  return ParallelCompose(curves);
}

EpsilonBound RdpToDp(const RdpCurve& curve, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  double best = kInf;
  double best_order = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < curve.grid().size(); ++i) {
    double a = curve.grid().orders()[i];
    double e = curve.eps()[i];
    if (std::isinf(e)) continue;
    if (e == 0.0) return {0.0, a};  // zero divergence: identical distributions
    double val = e + std::log(1.0 / delta) / (a - 1.0) - std::log(a) / (a - 1.0) +
                 std::log1p(-1.0 / a);
    if (val < best) {
      best = val;
      best_order = a;
    }
  }
  if (std::isinf(best)) return {kInf, best_order};
  return {std::max(best, 0.0), best_order};
}

DeltaBound RdpToDelta(const RdpCurve& curve, double epsilon) {
  if (std::isnan(epsilon) || epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  double best_log = kInf;
  double best_order = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < curve.grid().size(); ++i) {
    double a = curve.grid().orders()[i];
    double e = curve.eps()[i];
    if (std::isinf(e)) continue;
    if (e == 0.0) return {0.0, a};
    double logd = (a - 1.0) * (e - epsilon) - std::log(a) + (a - 1.0) * std::log1p(-1.0 / a);
    if (logd < best_log) {
      best_log = logd;
      best_order = a;
    }
  }
  if (std::isinf(best_log)) return {1.0, best_order};  // vacuous bound
  return {std::min(std::exp(best_log), 1.0), best_order};
}

}  // namespace dptune
