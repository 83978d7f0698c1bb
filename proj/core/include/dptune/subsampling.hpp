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

#include "dptune/rdp.hpp"

// Privacy amplification by Poisson subsampling for RDP curves, under the
// add/remove neighbourhood relation.
namespace dptune {

// Amplified RDP bound at integer order alpha >= 2 for a mechanism run on a
// Poisson subsample with inclusion probability gamma:
//
//   eps'(alpha) = 1/(alpha-1) * log(
//       (1-gamma)^(alpha-1) (alpha gamma - gamma + 1)
//     + C(alpha,2) gamma^2 (1-gamma)^(alpha-2) e^{eps(2)}
//     + 3 sum_{j=3}^{alpha} C(alpha,j) gamma^j (1-gamma)^(alpha-j) e^{(j-1) eps(j)} )
//
// The sum is assembled in log space with a single log-sum-exp pass;
// binomial coefficients go through lgamma. The formula is used as stated,
// including the factor 3 on the j >= 3 tail.
//
// Requires base to provide eps(j) at every integer j in 2..alpha (throws
// MissingOrderError) and gamma in [0,1], alpha integer >= 2 (throws
// std::domain_error). An infinite base value inside the range propagates to
// a +inf result (except at gamma = 0, where the subsample is always empty
// and the bound is exactly 0).
double SubsampleRdp(const RdpCurve& base, double gamma, int alpha);

// SubsampleRdp applied at every integer order of the base grid; fractional
// orders carry the +inf sentinel (the bound is stated for integer alpha
// only, and this module does not interpolate).
RdpCurve SubsampleCurve(const RdpCurve& base, double gamma);

}  // namespace dptune
