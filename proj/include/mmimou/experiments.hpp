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

#include <string>
#include <vector>

#include "mmimou/config.hpp"
#include "mmimou/sim.hpp"

namespace mmimou {

// One output record. CSV schema (stable order, deterministic formatting):
//   series    curve label (scheme or cluster count)
//   metric    quantity name
//   sweep_key name of the swept parameter ("n", "m_c", "d", "none")
//   sweep_value
//   sample    statistic name: "mean", "p50", ... or "q0.005".."q0.995" for
//             distribution quantiles
//   value
//   units     units of `value` (dBm, mbps, ratio, ...)
struct CsvRow {
  std::string series;
  std::string metric;
  std::string sweep_key;
  double sweep_value = 0.0;
  std::string sample;
  double value = 0.0;
  std::string units;
};

struct ExperimentResult {
  std::string name;
  std::vector<CsvRow> rows;
};

// Optional sweep overrides; empty vectors select the experiment defaults.
struct ExperimentOptions {
  std::vector<int> n_list;         // antenna sweep
  std::vector<int> mc_list;        // covariance sample sweep
  std::vector<int> d_list;         // null-space width sweep
  std::vector<int> clusters_list;  // hotspots per sector
};

// Names: wifi_cdf (fig4_wifi_cdf), bs_cdf (fig5_bs_cdf), ... The canonical
// experiment identifiers accepted here and on the command line are:
//   fig4_wifi_cdf            downlink interference CDF at Wi-Fi devices
//   fig5_bs_cdf              sensed-power CDF at listening base stations
//   fig6_rates_vs_n          mean rates vs antenna count (+ upper bounds)
//   fig7_covariance          rates/interference vs covariance sample count
//   fig8_rates_vs_d          cellular rate vs null-space width
//   fig9_interference_vs_d   worst-5% interference vs null-space width
//   custom                   single run of the base config
std::vector<std::string> experiment_names();

ExperimentResult run_experiment(const std::string& name, const SimConfig& base,
                                const ExperimentOptions& opt = {});

// Write rows to a CSV file (deterministic bytes for identical inputs).
void write_csv(const std::string& path, const std::vector<CsvRow>& rows);

// Write/overwrite the run manifest (config echo, seed, outputs, timing).
void write_manifest(const std::string& path, const std::string& experiment,
                    const SimConfig& cfg,
                    const std::vector<std::string>& outputs,
                    const std::string& status, double wall_seconds);

extern const char* const kVersion;

}  // namespace mmimou
