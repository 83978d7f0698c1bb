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

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace dptune {

// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seeded PRNG for the deterministic simulator. All distributions are
// hand-rolled on top of raw 64-bit draws so sequences do not depend on the
// standard library's distribution implementations.
//
// Stream splitting: Split(k) derives the seed of substream k as
// SplitMix64(seed ^ SplitMix64(k + 1)), so every consumer (subset draw,
// Poisson count, candidate trainings, final training) owns an independent
// stream and candidates can train concurrently without changing results.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : seed_(seed), engine_(SplitMix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  SplitRng Split(std::uint64_t stream) const {
    return SplitRng(SplitMix64(seed_ ^ SplitMix64(stream + 1)));
  }

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Standard normal via Box-Muller; two uniforms per draw, no caching.
  double Gaussian() {
    double u1 = Uniform();
    double u2 = Uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Exact Poisson draw by cdf inversion of P(K=k) = e^{-mu} mu^k / k!.
  // A single uniform decides K; the running pmf stays in normal range for
  // mu <= 700 (e^{-700} ~ 1e-304).
  int Poisson(double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
    if (mu > 700.0) throw std::invalid_argument("mu too large for pmf inversion");
    const double u = Uniform();
    double pmf = std::exp(-mu);
    double cdf = pmf;
    int k = 0;
    const int cap = static_cast<int>(mu + 12.0 * std::sqrt(mu) + 24.0);
    while (u > cdf && k < cap) {
      ++k;
      pmf *= mu / static_cast<double>(k);
      cdf += pmf;
    }
    return k;
  }

  // Uniform integer in [0, n).
  std::size_t UniformIndex(std::size_t n) {
    return static_cast<std::size_t>(Uniform() * static_cast<double>(n)) % n;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace dptune
