// SPDX-License-Identifier: Apache-2.0
//
// mmimou-sim: system-level simulation of massive MIMO cellular networks
// sharing unlicensed spectrum with Wi-Fi
// Copyright (C) 2026 the mmimou-sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstdint>

namespace mmimou {

// Deterministic splitmix64 stream (SplittableRandom-style).
//
// Every simulation phase and every propagation link derives its own stream
// from (drop seed, stream tag, entity key) via mix(). Channel realizations
// are therefore pure functions of the drop seed and the entity identifiers:
// they do not depend on evaluation order, on threading, or on which subset
// of links a caller chooses to materialize. This is what makes paired-seed
// comparisons across schemes and sweep parameters exact.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, bound). The modulo bias is < 2^-53 for any bound
  // that occurs here (device counts, pilot indices) and is irrelevant next
  // to the Monte Carlo noise floor.
  std::uint64_t integer(std::uint64_t bound) { return next_u64() % bound; }

  // Standard normal via Box-Muller; the second variate is cached so draws
  // alternate deterministically.
  double normal();

  // Circularly-symmetric complex normal with unit variance, i.e. the real
  // and imaginary parts are independent N(0, 1/2).
  std::complex<double> cnormal() {
    const double s = 0.7071067811865475244;  // 1/sqrt(2)
    double re = normal();
    double im = normal();
    return {s * re, s * im};
  }

  // Poisson by Knuth's product method; fine for the means used here (<= ~64).
  int poisson(double mean);

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stable 64-bit hash combine used to derive sub-streams. The exact function
// is part of the reproducibility contract: identical seeds reproduce
// identical runs byte for byte on any platform.
std::uint64_t mix(std::uint64_t a, std::uint64_t b);
std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c);

// Tags naming the independent random streams of one simulated drop. Keeping
// the phases on separate streams means that, e.g., changing the number of
// covariance snapshots cannot shift the user positions of the same drop.
enum class Stream : std::uint64_t {
  ue_drop = 0x11,
  wifi_drop = 0x12,
  slow_fading = 0x13,
  fast_fading = 0x14,
  covariance = 0x15,
  lbt = 0x16,
  pilot_assign = 0x17,
  pilot_rx = 0x18,
  activity = 0x19,
};

inline std::uint64_t stream_tag(Stream s) {
  return static_cast<std::uint64_t>(s);
}

// Stream for a whole phase of one drop.
inline Rng phase_rng(std::uint64_t drop_seed, Stream s) {
  return Rng(mix(drop_seed, stream_tag(s)));
}

// Stream for one entity (sector, base station, cell, link) within a phase.
inline Rng entity_rng(std::uint64_t drop_seed, Stream s, std::uint64_t key) {
  return Rng(mix(drop_seed, stream_tag(s), key));
}

}  // namespace mmimou
