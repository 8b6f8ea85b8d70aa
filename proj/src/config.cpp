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

#include "mmimou/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <variant>

#include "mmimou/geom.hpp"

namespace mmimou {

double SimConfig::ue_noise_mw() const {
  return db_to_lin(noise_density_dbm_hz + 10.0 * std::log10(bandwidth_hz) +
                   ue_noise_figure_db);
}

double SimConfig::bs_noise_mw() const {
  return db_to_lin(noise_density_dbm_hz + 10.0 * std::log10(bandwidth_hz) +
                   bs_noise_figure_db);
}

double SimConfig::bs_tx_power_mw() const { return db_to_lin(bs_tx_power_dbm); }

double SimConfig::gamma_lbt_mw() const { return db_to_lin(gamma_lbt_dbm); }

namespace {

using Field = std::variant<int SimConfig::*, double SimConfig::*,
                           bool SimConfig::*, std::uint64_t SimConfig::*,
                           std::string SimConfig::*>;

struct KeyInfo {
  const char* name;
  Field field;
};

const std::vector<KeyInfo>& registry() {
  static const std::vector<KeyInfo> keys = {
      {"layout.sites", &SimConfig::sites},
      {"layout.isd_m", &SimConfig::isd_m},
      {"layout.sectors_per_site", &SimConfig::sectors_per_site},
      {"layout.min_bs_dist_m", &SimConfig::min_bs_dist_m},
      {"layout.ue_mean_per_sector", &SimConfig::ue_mean_per_sector},
      {"layout.wifi_clusters_per_sector", &SimConfig::wifi_clusters_per_sector},
      {"layout.wifi_cluster_radius_m", &SimConfig::wifi_cluster_radius_m},
      {"layout.bs_height_m", &SimConfig::bs_height_m},
      {"layout.device_height_m", &SimConfig::device_height_m},
      {"bs.antennas", &SimConfig::bs_antennas},
      {"bs.tx_power_dbm", &SimConfig::bs_tx_power_dbm},
      {"bs.downtilt_deg", &SimConfig::bs_downtilt_deg},
      {"bs.noise_figure_db", &SimConfig::bs_noise_figure_db},
      {"bs.max_gain_dbi", &SimConfig::bs_max_gain_dbi},
      {"bs.beamwidth_deg", &SimConfig::bs_beamwidth_deg},
      {"bs.backlobe_db", &SimConfig::bs_backlobe_db},
      {"wifi.ap_power_dbm", &SimConfig::ap_power_dbm},
      {"wifi.sta_power_dbm", &SimConfig::sta_power_dbm},
      {"wifi.stas_per_cluster", &SimConfig::stas_per_cluster},
      {"wifi.cluster_rate_mbps", &SimConfig::wifi_cluster_rate_mbps},
      {"channel.carrier_ghz", &SimConfig::carrier_ghz},
      {"channel.bandwidth_hz", &SimConfig::bandwidth_hz},
      {"channel.ue_noise_figure_db", &SimConfig::ue_noise_figure_db},
      {"channel.noise_density_dbm_hz", &SimConfig::noise_density_dbm_hz},
      {"channel.ricean_k0_db", &SimConfig::ricean_k0_db},
      {"channel.ricean_k_slope_db_m", &SimConfig::ricean_k_slope_db_m},
      {"channel.shadow_macro_los_db", &SimConfig::shadow_macro_los_db},
      {"channel.shadow_macro_nlos_db", &SimConfig::shadow_macro_nlos_db},
      {"channel.shadow_d2d_los_db", &SimConfig::shadow_d2d_los_db},
      {"channel.shadow_d2d_nlos_db", &SimConfig::shadow_d2d_nlos_db},
      {"channel.macro_floor_m", &SimConfig::macro_floor_m},
      {"channel.d2d_floor_m", &SimConfig::d2d_floor_m},
      {"scheduler.k_ues", &SimConfig::k_ues},
      {"scheduler.d_policy", &SimConfig::d_policy},
      {"scheduler.d_fixed", &SimConfig::d_fixed},
      {"scheduler.rank_threshold_over_noise_db",
       &SimConfig::rank_threshold_over_noise_db},
      {"scheduler.ue_sensitivity_dbm", &SimConfig::ue_sensitivity_dbm},
      {"phy.gamma_lbt_dbm", &SimConfig::gamma_lbt_dbm},
      {"phy.lbt_snapshots", &SimConfig::lbt_snapshots},
      {"phy.pilot_length", &SimConfig::pilot_length},
      {"phy.p0_dbm", &SimConfig::p0_dbm},
      {"phy.pc_alpha", &SimConfig::pc_alpha},
      {"phy.p_max_dbm", &SimConfig::p_max_dbm},
      {"phy.zf_condition_bound", &SimConfig::zf_condition_bound},
      {"covariance.mode", &SimConfig::cov_mode},
      {"covariance.samples", &SimConfig::cov_samples},
      {"sim.scheme", &SimConfig::scheme},
      {"sim.drops", &SimConfig::drops},
      {"sim.seed", &SimConfig::seed},
      {"sim.force_transmit", &SimConfig::force_transmit},
      {"sim.threads", &SimConfig::threads},
      {"sim.out_dir", &SimConfig::out_dir},
  };
  return keys;
}

const KeyInfo& find_key(const std::string& key) {
  for (const auto& k : registry())
    if (key == k.name) return k;
  throw ConfigError("unknown config key '" + key + "'");
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& k : registry()) out.emplace_back(k.name);
  return out;
}

void config_set(SimConfig& cfg, const std::string& key,
                const std::string& value) {
  const KeyInfo& info = find_key(key);
  const std::string v = trim(value);
  auto bad = [&]() {
    return ConfigError("bad value '" + v + "' for config key '" + key + "'");
  };
  std::visit(
      [&](auto member) {
        using T = std::remove_reference_t<decltype(cfg.*member)>;
        if constexpr (std::is_same_v<T, std::string>) {
          if (v.empty()) throw bad();
          cfg.*member = v;
        } else if constexpr (std::is_same_v<T, bool>) {
          if (v == "true" || v == "1")
            cfg.*member = true;
          else if (v == "false" || v == "0")
            cfg.*member = false;
          else
            throw bad();
        } else {
          std::size_t used = 0;
          try {
            if constexpr (std::is_same_v<T, int>) {
              long parsed = std::stol(v, &used);
              cfg.*member = static_cast<int>(parsed);
            } else if constexpr (std::is_same_v<T, std::uint64_t>) {
              cfg.*member = std::stoull(v, &used);
            } else {
              cfg.*member = std::stod(v, &used);
            }
          } catch (const std::exception&) {
            throw bad();
          }
          if (used != v.size()) throw bad();
        }
      },
      info.field);
}

std::string config_get(const SimConfig& cfg, const std::string& key) {
  const KeyInfo& info = find_key(key);
  return std::visit(
      [&](auto member) -> std::string {
        using T = std::remove_reference_t<decltype(cfg.*member)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return cfg.*member;
        } else if constexpr (std::is_same_v<T, bool>) {
          return (cfg.*member) ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.17g", cfg.*member);
          return buf;
        } else {
          return std::to_string(cfg.*member);
        }
      },
      info.field);
}

SimConfig parse_config_text(const std::string& text) {
  SimConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    config_set(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

SimConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void apply_overrides(
    SimConfig& cfg,
    const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) config_set(cfg, k, v);
}

std::string serialize_config(const SimConfig& cfg) {
  std::ostringstream out;
  for (const auto& key : config_keys())
    out << key << " = " << config_get(cfg, key) << "\n";
  return out.str();
}

void validate_config(const SimConfig& cfg, bool require_antennas) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (cfg.sites != 1 && cfg.sites != 7 && cfg.sites != 19)
    fail("layout.sites must be 1, 7 or 19");
  if (cfg.isd_m <= 0) fail("layout.isd_m must be positive");
  if (cfg.sectors_per_site < 1) fail("layout.sectors_per_site must be >= 1");
  if (cfg.ue_mean_per_sector < 0) fail("layout.ue_mean_per_sector must be >= 0");
  if (cfg.wifi_clusters_per_sector != 0 && cfg.wifi_clusters_per_sector != 1 &&
      cfg.wifi_clusters_per_sector != 2 && cfg.wifi_clusters_per_sector != 4)
    fail("layout.wifi_clusters_per_sector must be one of 0, 1, 2, 4");
  if (cfg.wifi_cluster_radius_m < 0)
    fail("layout.wifi_cluster_radius_m must be >= 0");
  if (require_antennas && cfg.bs_antennas <= 0)
    fail("bs.antennas is required (set it in the config or with --set)");
  if (cfg.bs_antennas < 0 || cfg.bs_antennas > 1024)
    fail("bs.antennas out of range");
  if (cfg.stas_per_cluster < 0) fail("wifi.stas_per_cluster must be >= 0");
  if (cfg.bandwidth_hz <= 0) fail("channel.bandwidth_hz must be positive");
  if (cfg.carrier_ghz <= 0) fail("channel.carrier_ghz must be positive");
  if (cfg.k_ues < 1) fail("scheduler.k_ues must be >= 1");
  if (cfg.pilot_length < cfg.k_ues)
    fail("phy.pilot_length must be >= scheduler.k_ues (distinct pilots per cell)");
  if (cfg.d_policy != "half_excess" && cfg.d_policy != "fixed" &&
      cfg.d_policy != "rank_cover")
    fail("scheduler.d_policy must be half_excess, fixed or rank_cover");
  if (cfg.d_policy == "fixed") {
    if (cfg.d_fixed < 0) fail("scheduler.d_fixed must be set for policy 'fixed'");
    if (cfg.bs_antennas > 0 && cfg.d_fixed > cfg.bs_antennas - cfg.k_ues)
      fail("scheduler.d_fixed exceeds the degrees-of-freedom budget "
           "(must be <= bs.antennas - scheduler.k_ues)");
  }
  if (cfg.bs_antennas > 0 && cfg.k_ues > cfg.bs_antennas)
    fail("scheduler.k_ues cannot exceed bs.antennas");
  if (cfg.lbt_snapshots < 1) fail("phy.lbt_snapshots must be >= 1");
  if (cfg.pilot_length < 1) fail("phy.pilot_length must be >= 1");
  if (cfg.zf_condition_bound <= 1) fail("phy.zf_condition_bound must be > 1");
  if (cfg.cov_mode != "exact" && cfg.cov_mode != "estimated")
    fail("covariance.mode must be exact or estimated");
  if (cfg.cov_mode == "estimated" && cfg.cov_samples < 1)
    fail("covariance.samples must be >= 1");
  if (cfg.scheme != "mmimo_u" && cfg.scheme != "conventional")
    fail("sim.scheme must be mmimo_u or conventional");
  if (cfg.drops < 1) fail("sim.drops must be >= 1");
  if (cfg.threads < 1) fail("sim.threads must be >= 1");
}

}  // namespace mmimou
