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
#include "dptune/calibration.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dptune/mechanism.hpp"
#include "dptune/parallel.hpp"

namespace dptune {
namespace {

RdpCurve ForwardCurve(double sigma, double gamma, long steps, const AlphaGrid& grid) {
  return MechanismSpec::Composed(MechanismSpec::SubsampledGaussian(sigma, gamma), steps)
      .Curve(grid);
}

// Generic bisection for the smallest sigma satisfying a monotone predicate
// (larger sigma = more noise = easier target). Returns the bracket floor
// when even that satisfies; throws NoSolutionError when the ceiling fails.
template <typename Pred>
double BisectSigma(Pred&& satisfied, const std::string& what) {
  double lo = kSigmaBracketLo;
  double hi = kSigmaBracketHi;
  if (satisfied(lo)) return lo;
  if (!satisfied(hi)) {
    throw NoSolutionError("target unreachable for " + what + " within sigma bracket [" +
                          std::to_string(kSigmaBracketLo) + ", " +
                          std::to_string(kSigmaBracketHi) + "]");
  }
  for (int it = 0; it < kSigmaMaxIter && (hi - lo) > kSigmaRelTol * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (satisfied(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

double ForwardEpsilon(double sigma, double gamma, long steps, double delta,
                      const AlphaGrid& grid) {
  return RdpToDp(ForwardCurve(sigma, gamma, steps, grid), delta).epsilon;
}

double CalibrateSigma(double gamma, long steps, const PrivacyTarget& target,
                      const AlphaGrid& grid) {
  target.Validate();
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");

  auto satisfied = [&](double sigma) {
    return ForwardEpsilon(sigma, gamma, steps, target.delta, grid) <= target.epsilon;
  };
  double sigma = BisectSigma(satisfied, "sigma(gamma=" + std::to_string(gamma) +
                                            ", T=" + std::to_string(steps) + ")");
  // Post-hoc verification: the returned sigma meets the target; one
  // tolerance step less noise does not (unless the search never left the
  // bracket floor).
  if (!satisfied(sigma)) {
    throw std::logic_error("calibrated sigma fails the forward check (non-monotone accountant?)");
  }
  if (sigma > kSigmaBracketLo && satisfied(sigma * (1.0 - 10.0 * kSigmaRelTol))) {
    throw std::logic_error("calibrated sigma is not minimal (non-monotone accountant?)");
  }
  return sigma;
}

long CalibrateSteps(double gamma, double sigma, const PrivacyTarget& target,
                    const AlphaGrid& grid) {
  target.Validate();
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");

  auto ok = [&](long steps) {
    return ForwardEpsilon(sigma, gamma, steps, target.delta, grid) <= target.epsilon;
  };
  if (!ok(1)) return 0;

  // Doubling: composition is pointwise linear in T, so the accounted epsilon
  // increases with T and the first failing power of two brackets the answer.
  long lo = 1;
  long hi = 2;
  constexpr long kStepsCap = 1L << 40;
  while (ok(hi)) {
    lo = hi;
    if (hi > kStepsCap) {
      throw std::logic_error("accounted epsilon failed to grow with T (non-monotone accountant?)");
    }
    hi *= 2;
  }
  while (hi - lo > 1) {
    long mid = lo + (hi - lo) / 2;
    if (ok(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (ok(lo + 1)) {
    throw std::logic_error("steps search found a non-monotone boundary");
  }
  return lo;
}

double CalibrateSigmaAlphaLine(double gamma, long steps, double slope, const AlphaGrid& grid) {
  if (!(slope > 0.0)) throw std::invalid_argument("slope must be > 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");

  auto satisfied = [&](double sigma) {
    RdpCurve curve = ForwardCurve(sigma, gamma, steps, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double a = grid.orders()[i];
      if (!AlphaGrid::IsIntegerOrder(a)) continue;
      if (curve.eps()[i] > slope * a) return false;
    }
    return true;
  };
  double sigma = BisectSigma(satisfied, "alpha-line sigma(c=" + std::to_string(slope) + ")");
  if (!satisfied(sigma)) {
    throw std::logic_error("alpha-line sigma fails the predicate after bisection");
  }
  return sigma;
}

GridCalibration GridUniformCurve(std::span<const GridEntry> entries,
                                 const PrivacyTarget& target, const AlphaGrid& grid) {
  if (entries.empty()) throw std::invalid_argument("grid must be nonempty");
  std::vector<double> sigmas(entries.size());
  std::vector<RdpCurve> curves(entries.size(), RdpCurve::Zero(grid));

  ParallelFor(entries.size(), [&](std::size_t i) {
    const GridEntry& e = entries[i];
    try {
      sigmas[i] = CalibrateSigma(e.gamma, e.steps, target, grid);
    } catch (const NoSolutionError& err) {
      std::ostringstream msg;
      msg << "grid entry (gamma=" << e.gamma << ", steps=" << e.steps << "): " << err.what();
      throw NoSolutionError(msg.str());
    }
    curves[i] = ForwardCurve(sigmas[i], e.gamma, e.steps, grid);
  });

  RdpCurve uniform = UniformGridBound(curves);
  return {std::move(sigmas), std::move(curves), std::move(uniform)};
}

std::vector<GridEntry> GridEntriesFromJson(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("grid JSON must be an array");
  std::vector<GridEntry> entries;
  for (const auto& item : j) {
    double gamma = item.at("gamma").get<double>();
    double epochs = item.at("epochs").get<double>();
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("grid gamma out of (0, 1]");
    if (!(epochs > 0.0)) throw std::invalid_argument("grid epochs must be > 0");
    long steps = std::lround(epochs / gamma);
    entries.push_back({gamma, steps});
  }
  return entries;
}

void WriteCalibrationCsv(std::ostream& out, std::span<const GridEntry> entries,
                         const GridCalibration& result, const PrivacyTarget& target,
                         const AlphaGrid& grid) {
  out << "gamma,steps,sigma,eps_check\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    out << entries[i].gamma << "," << entries[i].steps << "," << result.sigmas[i] << ","
        << ForwardEpsilon(result.sigmas[i], entries[i].gamma, entries[i].steps, target.delta,
                          grid)
        << "\n";
  }
}

}  // namespace dptune
