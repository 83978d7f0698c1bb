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
#include "dptune/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "dptune/logspace.hpp"

namespace dptune {
namespace {

using logspace::kInf;

constexpr double kLogTwoPi = 1.8378770664093453;  // log(2*pi)

double LogMixturePdf(const GaussianMixture& m, double t) {
  double max_term = -kInf;
  std::array<double, 8> terms;  // mixtures here have at most a few components
  std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = m[i];
    double z = (t - c.mean) / c.sigma;
    terms[i] = std::log(c.weight) - 0.5 * z * z - std::log(c.sigma) - 0.5 * kLogTwoPi;
    max_term = std::max(max_term, terms[i]);
  }
  if (max_term == -kInf) return -kInf;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += std::exp(terms[i] - max_term);
  return max_term + std::log(sum);
}

// 10-point Gauss-Legendre abscissae/weights on [-1, 1].
constexpr std::array<double, 5> kGlNodes = {
    0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
    0.8650633666889845, 0.9739065285171717};
constexpr std::array<double, 5> kGlWeights = {
    0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
    0.1494513491505806, 0.0666713443086881};

struct Window {
  double lo;
  double hi;
  double log_peak;  // peak of the direct log-integrand over the scan
};

// Compensated accumulator; the excess integrand cancels heavily around
// near-identical mixtures, and plain summation noise would swamp it.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void Add(double v) {
    double y = v - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// Locates the region where either the direct log-integrand
// alpha log P + (1-alpha) log Q or log Q itself is within 80 nats of its
// peak (relative truncation below 1e-12 of the integral). The direct
// integrand can concentrate as far out as alpha * (mean span), so the scan
// range scales with alpha.
Window LocateWindow(const GaussianMixture& p, const GaussianMixture& q, double alpha) {
  double mean_lo = kInf, mean_hi = -kInf, sigma_max = 0.0, sigma_min = kInf;
  for (const auto& mix : {p, q}) {
    for (const auto& c : mix) {
      mean_lo = std::min(mean_lo, c.mean);
      mean_hi = std::max(mean_hi, c.mean);
      sigma_max = std::max(sigma_max, c.sigma);
      sigma_min = std::min(sigma_min, c.sigma);
    }
  }
  const double span = mean_hi - mean_lo;
  const double pad = (alpha + 60.0) * sigma_max + alpha * span + 1.0;
  const double scan_lo = mean_lo - pad;
  const double scan_hi = mean_hi + pad;

  const std::size_t scan_points = std::min<std::size_t>(
      200001, std::max<std::size_t>(
                  4001, static_cast<std::size_t>((scan_hi - scan_lo) / (0.2 * sigma_min)) + 1));
  const double h = (scan_hi - scan_lo) / static_cast<double>(scan_points - 1);

  double direct_peak = -kInf;
  double envelope_peak = -kInf;
  std::vector<double> envelope(scan_points);
  for (std::size_t i = 0; i < scan_points; ++i) {
    double t = scan_lo + h * static_cast<double>(i);
    double lq = LogMixturePdf(q, t);
    double direct = alpha * LogMixturePdf(p, t) + (1.0 - alpha) * lq;
    direct_peak = std::max(direct_peak, direct);
    envelope[i] = std::max(direct, lq);
    envelope_peak = std::max(envelope_peak, envelope[i]);
  }

  const double cutoff = envelope_peak - 80.0;
  std::size_t first = 0, last = scan_points - 1;
  while (first < scan_points && envelope[first] < cutoff) ++first;
  while (last > 0 && envelope[last] < cutoff) --last;
  first = first > 2 ? first - 2 : 0;
  last = std::min(last + 2, scan_points - 1);
  return {scan_lo + h * static_cast<double>(first),
          scan_lo + h * static_cast<double>(last), direct_peak};
}

// Composite quadrature of fn over the window with either rule.
template <typename Fn>
double Integrate(Fn&& fn, const Window& w, QuadratureRule rule, std::size_t intervals) {
  if (rule == QuadratureRule::kSimpson && intervals % 2 != 0) ++intervals;
  const double h = (w.hi - w.lo) / static_cast<double>(intervals);
  KahanSum acc;
  if (rule == QuadratureRule::kSimpson) {
    for (std::size_t i = 0; i <= intervals; ++i) {
      double t = w.lo + h * static_cast<double>(i);
      double weight = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      acc.Add(weight * fn(t));
    }
    return acc.sum * (h / 3.0);
  }
  for (std::size_t cell = 0; cell < intervals; ++cell) {
    double mid = w.lo + h * (static_cast<double>(cell) + 0.5);
    double half = 0.5 * h;
    for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
      acc.Add(kGlWeights[k] * half * (fn(mid - half * kGlNodes[k]) + fn(mid + half * kGlNodes[k])));
    }
  }
  return acc.sum;
}

void ValidateMixture(const GaussianMixture& m) {
  if (m.empty() || m.size() > 8) {
    throw std::invalid_argument("mixture must have 1..8 components");
  }
  double total = 0.0;
  for (const auto& c : m) {
    if (c.weight < 0.0 || !(c.sigma > 0.0)) {
      throw std::invalid_argument("component weights must be >= 0 and sigmas > 0");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture weights must sum to 1");
  }
}

}  // namespace

double RenyiDivergence(const GaussianMixture& p, const GaussianMixture& q, double alpha,
                       QuadratureRule rule, std::size_t intervals) {
  ValidateMixture(p);
  ValidateMixture(q);
  if (!(alpha > 1.0)) throw std::domain_error("alpha must be > 1");
  // Zero-weight components drop out so log(0) never enters the scan.
  GaussianMixture pp, qq;
  for (const auto& c : p)
    if (c.weight > 0.0) pp.push_back(c);
  for (const auto& c : q)
    if (c.weight > 0.0) qq.push_back(c);

  const Window w = LocateWindow(pp, qq, alpha);

  // Integrate the excess against Q:
  //   int P^a Q^(1-a) - 1 = int Q(t) (e^{a r(t)} - 1) dt,  r = log(P/Q),
  // which keeps full relative precision when the divergence is tiny (the
  // direct integral would be 1 + epsilon). Where a*r is large the -1 is
  // negligible and the term falls back to the direct integrand value.
  auto excess_term = [&](double t) {
    double lq = LogMixturePdf(qq, t);
    double r = LogMixturePdf(pp, t) - lq;
    double ar = alpha * r;
    if (ar > 30.0) return std::exp(lq + ar);
    return std::exp(lq) * std::expm1(ar);
  };
  double excess = Integrate(excess_term, w, rule, intervals);
  if (std::isfinite(excess)) {
    return std::max(std::log1p(excess) / (alpha - 1.0), 0.0);
  }

  // The excess overflowed (huge divergences): integrate the direct form
  // with the peak factored out.
  auto direct_term = [&](double t) {
    double logf =
        alpha * LogMixturePdf(pp, t) + (1.0 - alpha) * LogMixturePdf(qq, t) - w.log_peak;
    return std::exp(logf);
  };
  double scaled = Integrate(direct_term, w, rule, intervals);
  return std::max((w.log_peak + std::log(scaled)) / (alpha - 1.0), 0.0);
}

double RenyiQuadratureOracle(double sigma, double gamma, double alpha) {
  if (!(sigma > 0.0)) throw std::domain_error("sigma must be > 0");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("gamma must lie in [0, 1]");
  if (!(alpha > 1.0)) throw std::domain_error("alpha must be > 1");
  if (gamma == 0.0) return 0.0;  // P == Q

  const GaussianMixture p = {{gamma, 1.0, sigma}, {1.0 - gamma, 0.0, sigma}};
  const GaussianMixture q = {{1.0, 0.0, sigma}};

  // Each direction is computed with the fixed grid, a doubled refinement,
  // and the independent Gauss-Legendre rule; all three must agree.
  auto checked = [&](const GaussianMixture& num, const GaussianMixture& den) {
    const std::size_t n = 20000;
    double simpson = RenyiDivergence(num, den, alpha, QuadratureRule::kSimpson, n);
    double simpson2 = RenyiDivergence(num, den, alpha, QuadratureRule::kSimpson, 2 * n);
    double gauss = RenyiDivergence(num, den, alpha, QuadratureRule::kGaussLegendre, n / 10);
    double scale = std::max(std::abs(simpson2), 1e-12);
    if (std::abs(simpson - simpson2) > 1e-9 * scale ||
        std::abs(gauss - simpson2) > 1e-9 * scale) {
      throw NonConvergenceError("quadrature refinements disagree beyond 1e-9 relative");
    }
    return simpson2;
  };
  return std::max(checked(p, q), checked(q, p));
}

}  // namespace dptune
