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
#include <vector>

#include <Eigen/Dense>

#include "mmimou/geom.hpp"

namespace mmimou {

struct BsParams {
  int antennas = 0;
  double height_m = 25.0;
  double downtilt_deg = 12.0;
  double tx_power_dbm = 30.0;
};

struct BaseStation {
  int id = -1;        // dense, one per sector
  int site = -1;
  int sector = -1;    // == id; kept for clarity at call sites
  Vec2 pos;           // co-located with the site center
  double azimuth_deg = 0.0;
  int antennas = 0;
  double height_m = 25.0;
  double downtilt_deg = 12.0;
  double tx_power_dbm = 30.0;
};

struct UserEquipment {
  int id = -1;
  int sector = -1;     // sector wedge the UE was dropped in
  Vec2 pos;
  double height_m = 1.5;
  int serving_bs = -1; // filled by associate_ues()
};

enum class WifiKind { ap, sta };

struct WiFiDevice {
  int id = -1;
  WifiKind kind = WifiKind::sta;
  int cluster = -1;
  int sector = -1;
  Vec2 pos;
  double height_m = 1.5;
  double tx_power_dbm = 18.0;
  int serving_ap = -1;   // nearest AP (wrap distance, ties to lowest id)
  bool active = false;   // current traffic state, set per coherence interval
};

struct WifiCluster {
  int id = -1;
  int sector = -1;
  Vec2 center;
  double radius_m = 20.0;
};

// Hexagonal site grid with wrap-around. Sites lie on a triangular lattice
// with spacing isd_m; clusters of 1, 7 or 19 sites tile the plane, and the
// six translation vectors of that tiling implement the torus topology.
struct NetworkLayout {
  int num_sites = 0;
  double isd_m = 0.0;
  int sectors_per_site = 3;
  std::vector<Vec2> sites;
  std::vector<BaseStation> bss;       // sites * sectors_per_site entries
  std::vector<Vec2> wrap_vectors;     // 6 mirror displacements (empty for 1 site)

  int sector_count() const { return num_sites * sectors_per_site; }
  // Circumradius of one site's hexagonal cell.
  double cell_radius() const { return isd_m / 1.7320508075688772; }
};

// Build the site grid and per-sector base stations. num_sites must be 1, 7
// or 19; sector boresights are at 0/120/240 degrees.
NetworkLayout build_layout(int num_sites, double isd_m, int sectors_per_site,
                           const BsParams& bs);

// Image of `b` (b + wrap vector, including the zero vector) closest to `a`.
Vec2 wrap_image(const NetworkLayout& layout, Vec2 a, Vec2 b);

// Torus distance: min over all mirror images. Never exceeds |a - b|.
double wrap_distance(const NetworkLayout& layout, Vec2 a, Vec2 b);

// Point-in-cell test for the hexagon centered at the origin (vertices at
// 30 + k*60 degrees, apothem isd/2).
bool point_in_hexagon(Vec2 p, double isd_m);

// Sector wedge index of a point relative to the site center: wedge s covers
// azimuths within +-(180/sectors) degrees of boresight s * 360/sectors.
int azimuth_sector(Vec2 rel, int sectors_per_site);

// Drop users: per-sector Poisson counts, positions uniform over the sector
// wedge of the site hexagon, at least min_dist_m from the site center
// (violations are redrawn). Deterministic per (drop_seed, sector).
std::vector<UserEquipment> drop_ues(const NetworkLayout& layout,
                                    double mean_per_sector, double min_dist_m,
                                    double height_m, std::uint64_t drop_seed);

struct WifiDropParams {
  int clusters_per_sector = 2;
  double radius_m = 20.0;
  int stas_per_cluster = 7;
  double ap_power_dbm = 24.0;
  double sta_power_dbm = 18.0;
  double height_m = 1.5;
  double min_center_dist_m = 55.0;  // keeps every member >= 35 m from the BS
};

struct WifiDrop {
  std::vector<WiFiDevice> devices;
  std::vector<WifiCluster> clusters;
};

// Drop Wi-Fi hotspots: cluster centers uniform over the sector wedge (center
// at least min_center_dist_m from the site so all members clear the BS
// distance floor), one AP plus stas_per_cluster STAs uniform in each disc.
// STAs are tagged with their nearest AP by wrap distance (ties to lowest id).
WifiDrop drop_wifi(const NetworkLayout& layout, const WifiDropParams& params,
                   std::uint64_t drop_seed);

// Associate each UE with the base station of largest slow-fading gain
// (rows of `gain` index base stations, columns UEs; ties to lowest BS id).
void associate_ues(std::vector<UserEquipment>& ues,
                   const Eigen::MatrixXd& gain);

}  // namespace mmimou
