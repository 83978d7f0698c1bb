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
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dptune/rdp.hpp"

// Inverse accounting: noise multipliers or training lengths meeting an
// approximate-DP target, plus the uniform candidate bound for grid search.
namespace dptune {

class NoSolutionError : public std::runtime_error {
 public:
  explicit NoSolutionError(const std::string& what) : std::runtime_error(what) {}
};

// Bisection bracket and tolerance shared by the sigma searches. The bracket
// covers all practical noise multipliers.
inline constexpr double kSigmaBracketLo = 1e-2;
inline constexpr double kSigmaBracketHi = 1e4;
inline constexpr double kSigmaRelTol = 1e-4;
inline constexpr int kSigmaMaxIter = 200;

// Smallest sigma (to relative tolerance kSigmaRelTol) such that T steps of
// the Poisson-subsampled Gaussian mechanism with ratio gamma convert to at
// most target.epsilon at target.delta. The result is re-verified forward;
// when the bisection actually ran (result above the bracket floor), the
// perturbed value sigma*(1 - 10*tol) is verified to violate the target.
// Throws NoSolutionError when the target is unreachable within the bracket.
double CalibrateSigma(double gamma, long steps, const PrivacyTarget& target,
                      const AlphaGrid& grid = AlphaGrid::Default());

// Largest integer T such that the forward-accounted epsilon stays within
// the target; 0 when even T = 1 violates it. Found by doubling then binary
// search, relying on the accounted epsilon increasing monotonously with the
// number of compositions; a detected non-monotonicity throws
// std::logic_error rather than being silently absorbed.
long CalibrateSteps(double gamma, double sigma, const PrivacyTarget& target,
                    const AlphaGrid& grid = AlphaGrid::Default());

// Smallest sigma such that T * eps_{gamma,sigma}(alpha) <= slope * alpha for
// every integer order alpha in the grid (the alpha-line candidate bound for
// random search). gamma = 1 is the plain Gaussian mechanism.
double CalibrateSigmaAlphaLine(double gamma, long steps, double slope,
                               const AlphaGrid& grid = AlphaGrid::Default());

// One grid-search cell: a subsampling ratio and an adjusted step count.
struct GridEntry {
  double gamma = 0.0;
  long steps = 0;
};

struct GridCalibration {
  std::vector<double> sigmas;    // one per entry
  std::vector<RdpCurve> curves;  // forward curve per entry at its sigma
  RdpCurve uniform;              // pointwise max: the uniform candidate bound
};

// Calibrates sigma for every (gamma, steps) pair against the target and
// returns the per-entry curves together with their pointwise maximum, which
// bounds the candidate-picking algorithm uniformly. Entries run in
// parallel; a failed entry raises NoSolutionError naming the pair.
GridCalibration GridUniformCurve(std::span<const GridEntry> entries,
                                 const PrivacyTarget& target,
                                 const AlphaGrid& grid = AlphaGrid::Default());

// Grid input as a JSON array of {"gamma": g, "epochs": E, "n": n}; steps
// are derived as epochs/gamma rounded to the nearest integer.
std::vector<GridEntry> GridEntriesFromJson(const nlohmann::json& j);

// Calibration report rows: gamma,steps,sigma,eps_check.
void WriteCalibrationCsv(std::ostream& out, std::span<const GridEntry> entries,
                         const GridCalibration& result, const PrivacyTarget& target,
                         const AlphaGrid& grid = AlphaGrid::Default());

// Forward accountant shared by the calibrations: the converted epsilon of T
// steps of the subsampled Gaussian (plain Gaussian at gamma = 1).
double ForwardEpsilon(double sigma, double gamma, long steps, double delta,
                      const AlphaGrid& grid = AlphaGrid::Default());

}  // namespace dptune
