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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mmimou {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Flat key-value configuration with dotted namespaces. Defaults describe the
// reference deployment: hexagonal macro grid with wrap-around, three sectors
// per site, Poisson user drops, and disc-shaped Wi-Fi hotspot clusters
// sharing the 5 GHz unlicensed channel.
struct SimConfig {
  // -- layout ---------------------------------------------------------------
  int sites = 7;                        // layout.sites: 1, 7 or 19
  double isd_m = 500.0;                 // layout.isd_m
  int sectors_per_site = 3;             // layout.sectors_per_site
  double min_bs_dist_m = 35.0;          // layout.min_bs_dist_m (2-D floor)
  double ue_mean_per_sector = 32.0;     // layout.ue_mean_per_sector (Poisson)
  int wifi_clusters_per_sector = 2;     // layout.wifi_clusters_per_sector
  double wifi_cluster_radius_m = 20.0;  // layout.wifi_cluster_radius_m
  double bs_height_m = 25.0;            // layout.bs_height_m
  double device_height_m = 1.5;         // layout.device_height_m (UE + Wi-Fi)

  // -- base station ---------------------------------------------------------
  int bs_antennas = 0;                  // bs.antennas (0 = unset, must be given)
  double bs_tx_power_dbm = 30.0;        // bs.tx_power_dbm
  double bs_downtilt_deg = 12.0;        // bs.downtilt_deg
  double bs_noise_figure_db = 5.0;      // bs.noise_figure_db (listening chain)
  double bs_max_gain_dbi = 8.0;         // bs.max_gain_dbi (per element)
  double bs_beamwidth_deg = 65.0;       // bs.beamwidth_deg (3 dB, az and el)
  double bs_backlobe_db = 30.0;         // bs.backlobe_db (pattern floor)

  // -- wifi -----------------------------------------------------------------
  double ap_power_dbm = 24.0;           // wifi.ap_power_dbm
  double sta_power_dbm = 18.0;          // wifi.sta_power_dbm
  int stas_per_cluster = 7;             // wifi.stas_per_cluster
  double wifi_cluster_rate_mbps = 65.0; // wifi.cluster_rate_mbps

  // -- channel --------------------------------------------------------------
  double carrier_ghz = 5.15;            // channel.carrier_ghz
  double bandwidth_hz = 20e6;           // channel.bandwidth_hz
  double ue_noise_figure_db = 9.0;      // channel.ue_noise_figure_db
  double noise_density_dbm_hz = -174.0; // channel.noise_density_dbm_hz
  double ricean_k0_db = 13.0;           // channel.ricean_k0_db
  double ricean_k_slope_db_m = 0.03;    // channel.ricean_k_slope_db_m
  double shadow_macro_los_db = 4.0;     // channel.shadow_macro_los_db
  double shadow_macro_nlos_db = 6.0;    // channel.shadow_macro_nlos_db
  double shadow_d2d_los_db = 3.0;       // channel.shadow_d2d_los_db
  double shadow_d2d_nlos_db = 7.0;      // channel.shadow_d2d_nlos_db
  double macro_floor_m = 10.0;          // channel.macro_floor_m
  double d2d_floor_m = 3.0;             // channel.d2d_floor_m

  // -- scheduler ------------------------------------------------------------
  int k_ues = 8;                        // scheduler.k_ues (spatial streams)
  std::string d_policy = "half_excess"; // scheduler.d_policy:
                                        //   half_excess | fixed | rank_cover
  int d_fixed = -1;                     // scheduler.d_fixed (for policy=fixed)
  double rank_threshold_over_noise_db = 10.0;
                                        // scheduler.rank_threshold_over_noise_db
  double ue_sensitivity_dbm = -94.0;    // scheduler.ue_sensitivity_dbm

  // -- phy ------------------------------------------------------------------
  double gamma_lbt_dbm = -62.0;         // phy.gamma_lbt_dbm
  int lbt_snapshots = 16;               // phy.lbt_snapshots
  int pilot_length = 8;                 // phy.pilot_length
  double p0_dbm = -58.0;                // phy.p0_dbm (uplink open-loop target)
  double pc_alpha = 0.6;                // phy.pc_alpha (path-loss compensation)
  double p_max_dbm = 23.0;              // phy.p_max_dbm (UE power cap)
  double zf_condition_bound = 1e12;     // phy.zf_condition_bound

  // -- covariance acquisition -------------------------------------------------
  std::string cov_mode = "exact";       // covariance.mode: exact | estimated
  int cov_samples = 128;                // covariance.samples (estimated mode)

  // -- run control ------------------------------------------------------------
  std::string scheme = "mmimo_u";       // sim.scheme: mmimo_u | conventional
  int drops = 100;                      // sim.drops
  std::uint64_t seed = 1;               // sim.seed
  bool force_transmit = false;          // sim.force_transmit (bypass LBT gate)
  int threads = 1;                      // sim.threads
  std::string out_dir = "out";          // sim.out_dir

  bool operator==(const SimConfig&) const = default;

  // Receiver noise power over the configured bandwidth, in mW.
  double ue_noise_mw() const;   // UE receive chain
  double bs_noise_mw() const;   // BS listening chain
  double bs_tx_power_mw() const;
  double gamma_lbt_mw() const;
};

// Names of all recognized keys, in emission order.
std::vector<std::string> config_keys();

// Set/get a single key from its string form. Throws ConfigError naming the
// key on unknown keys or unparseable values.
void config_set(SimConfig& cfg, const std::string& key, const std::string& value);
std::string config_get(const SimConfig& cfg, const std::string& key);

// Parse "key = value" lines ('#' comments, blank lines allowed).
SimConfig parse_config_text(const std::string& text);
SimConfig parse_config_file(const std::string& path);

// Apply key=value overrides in order.
void apply_overrides(SimConfig& cfg,
                     const std::vector<std::pair<std::string, std::string>>& kv);

// Canonical serialization; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const SimConfig& cfg);

// Cross-field validation: ranges, enum values, and the degrees-of-freedom
// budget (a fixed null-space width d must satisfy d <= antennas - k_ues).
// Throws ConfigError on the first violation.
void validate_config(const SimConfig& cfg, bool require_antennas = true);

}  // namespace mmimou
