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

#include <cstdint>
#include <string>
#include <vector>

#include "mmimou/config.hpp"
#include "mmimou/topology.hpp"

namespace mmimou {

// Everything measured in one Monte Carlo drop (one coherence interval).
struct DropMetrics {
  std::uint64_t seed = 0;  // drop seed, sufficient for exact replay

  struct UeRecord {
    int ue = -1;
    int bs = -1;
    double sinr = 0.0;      // 0 when the serving cell did not transmit
    double rate_bps = 0.0;
  };
  struct BsRecord {
    int bs = -1;
    bool lbt_passed = false;
    double lbt_mw = 0.0;       // sensed power (after projection if enhanced)
    bool precoder_failed = false;
    bool transmitting = false;
    int served = 0;
  };

  std::vector<UeRecord> ues;                  // selected UEs only
  std::vector<BsRecord> bss;                  // one per cell
  std::vector<double> wifi_interference_mw;   // one per Wi-Fi device
  std::vector<double> sector_wifi_rate_mbps;  // one per sector
  int n_sectors = 0;

  bool operator==(const DropMetrics&) const = default;
};

// Uniformly pick one active device per cluster (the hotspot's current
// talker). Returns device ids in ascending cluster order.
std::vector<int> sample_wifi_activity(const std::vector<WifiCluster>& clusters,
                                      const std::vector<WiFiDevice>& devices,
                                      Rng& rng);

// Per-sector Wi-Fi throughput: each cluster contributes per_cluster_mbps iff
// the worst (largest) cellular interference over its member devices stays
// below the detection threshold; blocked clusters defer and contribute 0.
double wifi_sector_rate_mbps(const std::vector<double>& cluster_worst_mw,
                             double gamma_dbm, double per_cluster_mbps);

// Run one drop end to end: topology, channels, covariance acquisition,
// degrees-of-freedom split, user selection, listen-before-talk, uplink
// pilots, precoding, and the downlink/interference metrics.
// Deterministic in (config, seed); identical calls give identical results.
DropMetrics run_drop(const SimConfig& cfg, std::uint64_t seed);

// Seed of drop `index` under master seed `master`.
std::uint64_t drop_seed(std::uint64_t master, int index);

// Run cfg.drops drops (cfg.threads workers); results ordered by drop index
// regardless of scheduling.
std::vector<DropMetrics> run_drops(const SimConfig& cfg);

// Pooled statistics over a set of drops.
struct AggregateResult {
  double cellular_rate_mean_bps = 0.0;  // mean over (drop, cell) of cell sum
  double wifi_rate_mean_mbps = 0.0;     // mean over (drop, sector)
  double lbt_pass_fraction = 0.0;
  std::vector<double> wifi_interference_dbm;  // sorted, one per (drop, device)
  std::vector<double> bs_lbt_dbm;             // sorted, one per (drop, cell)
  std::vector<double> ue_sinr_db;             // sorted, transmitting cells only
  int drop_count = 0;
};

AggregateResult aggregate(const std::vector<DropMetrics>& drops);

// Quantile with linear interpolation on a sorted sample vector, p in [0,1].
double quantile(const std::vector<double>& sorted, double p);

// Floor used when converting zero linear power to dB (no transmitter active).
constexpr double kDbFloor = -250.0;
double to_dbm_floored(double mw);

}  // namespace mmimou
