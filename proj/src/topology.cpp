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

#include "mmimou/topology.hpp"

#include <algorithm>
#include <stdexcept>

#include "mmimou/rng.hpp"

namespace mmimou {

namespace {

// Triangular lattice basis for the site grid.
Vec2 lattice_a1(double isd) { return {isd, 0.0}; }
Vec2 lattice_a2(double isd) { return {0.5 * isd, 0.8660254037844386 * isd}; }

// Hex (axial) distance of integer lattice coordinates.
int hex_ring(int q, int r) {
  int s = -q - r;
  return (std::abs(q) + std::abs(r) + std::abs(s)) / 2;
}

}  // namespace

NetworkLayout build_layout(int num_sites, double isd_m, int sectors_per_site,
                           const BsParams& bs) {
  if (num_sites != 1 && num_sites != 7 && num_sites != 19)
    throw std::invalid_argument("build_layout: num_sites must be 1, 7 or 19");
  if (isd_m <= 0.0)
    throw std::invalid_argument("build_layout: isd_m must be positive");
  if (sectors_per_site < 1)
    throw std::invalid_argument("build_layout: sectors_per_site must be >= 1");

  NetworkLayout lay;
  lay.num_sites = num_sites;
  lay.isd_m = isd_m;
  lay.sectors_per_site = sectors_per_site;

  const Vec2 a1 = lattice_a1(isd_m);
  const Vec2 a2 = lattice_a2(isd_m);
  const int max_ring = (num_sites == 19) ? 2 : (num_sites == 7 ? 1 : 0);

  // Center first, then rings in ascending order; within a ring sort by
  // azimuth for a stable, readable id assignment.
  std::vector<std::pair<int, Vec2>> ring_sites;
  for (int q = -max_ring; q <= max_ring; ++q) {
    for (int r = -max_ring; r <= max_ring; ++r) {
      int ring = hex_ring(q, r);
      if (ring > max_ring) continue;
      ring_sites.push_back({ring, a1 * q + a2 * r});
    }
  }
  std::stable_sort(ring_sites.begin(), ring_sites.end(),
                   [](const auto& l, const auto& r) {
                     if (l.first != r.first) return l.first < r.first;
                     double al = std::atan2(l.second.y, l.second.x);
                     double ar = std::atan2(r.second.y, r.second.x);
                     return al < ar;
                   });
  for (const auto& [ring, pos] : ring_sites) lay.sites.push_back(pos);

  // Wrap-around displacements: the cluster of 7 repeats on a lattice with
  // translation 2*a1 + a2 (|u|^2 = 7 isd^2); the cluster of 19 with
  // 3*a1 + 2*a2 (|u|^2 = 19 isd^2). The six 60-degree rotations of the
  // translation generate all nearest mirror images.
  if (num_sites > 1) {
    Vec2 u = (num_sites == 7) ? a1 * 2.0 + a2 : a1 * 3.0 + a2 * 2.0;
    for (int k = 0; k < 6; ++k)
      lay.wrap_vectors.push_back(u.rotated(deg2rad(60.0 * k)));
  }

  for (int s = 0; s < num_sites; ++s) {
    for (int c = 0; c < sectors_per_site; ++c) {
      BaseStation b;
      b.id = s * sectors_per_site + c;
      b.site = s;
      b.sector = b.id;
      b.pos = lay.sites[s];
      b.azimuth_deg = c * (360.0 / sectors_per_site);
      b.antennas = bs.antennas;
      b.height_m = bs.height_m;
      b.downtilt_deg = bs.downtilt_deg;
      b.tx_power_dbm = bs.tx_power_dbm;
      lay.bss.push_back(b);
    }
  }
  return lay;
}

Vec2 wrap_image(const NetworkLayout& layout, Vec2 a, Vec2 b) {
  Vec2 best = b;
  double best_d2 = (a - b).norm2();
  for (const Vec2& v : layout.wrap_vectors) {
    Vec2 cand = b + v;
    double d2 = (a - cand).norm2();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = cand;
    }
  }
  return best;
}

double wrap_distance(const NetworkLayout& layout, Vec2 a, Vec2 b) {
  return (a - wrap_image(layout, a, b)).norm();
}

bool point_in_hexagon(Vec2 p, double isd_m) {
  // Edge normals at 0/60/120 degrees; apothem isd/2.
  const double apothem = 0.5 * isd_m;
  const double c60 = 0.5, s60 = 0.8660254037844386;
  if (std::abs(p.x) > apothem) return false;
  if (std::abs(c60 * p.x + s60 * p.y) > apothem) return false;
  if (std::abs(-c60 * p.x + s60 * p.y) > apothem) return false;
  return true;
}

int azimuth_sector(Vec2 rel, int sectors_per_site) {
  double az = rad2deg(std::atan2(rel.y, rel.x));
  double width = 360.0 / sectors_per_site;
  // Shift so wedge s covers [s*width - width/2, s*width + width/2).
  double shifted = az + width / 2.0;
  if (shifted < 0.0) shifted += 360.0;
  int s = static_cast<int>(shifted / width);
  return (s >= sectors_per_site) ? 0 : s;
}

namespace {

// Uniform point in (sector wedge of the site hexagon) with |p| >= min_dist.
Vec2 sample_sector_point(Rng& rng, double isd_m, int sector,
                         int sectors_per_site, double min_dist_m) {
  const double r = isd_m / 1.7320508075688772;  // hexagon circumradius
  for (;;) {
    Vec2 p{rng.uniform(-r, r), rng.uniform(-r, r)};
    if (!point_in_hexagon(p, isd_m)) continue;
    if (p.norm() < min_dist_m) continue;
    if (azimuth_sector(p, sectors_per_site) != sector) continue;
    return p;
  }
}

}  // namespace

std::vector<UserEquipment> drop_ues(const NetworkLayout& layout,
                                    double mean_per_sector, double min_dist_m,
                                    double height_m, std::uint64_t drop_seed) {
  if (mean_per_sector < 0.0)
    throw std::invalid_argument("drop_ues: mean_per_sector must be >= 0");
  std::vector<UserEquipment> ues;
  int id = 0;
  for (const BaseStation& bs : layout.bss) {
    const int sector_local = bs.id % layout.sectors_per_site;
    Rng rng = entity_rng(drop_seed, Stream::ue_drop,
                         static_cast<std::uint64_t>(bs.id));
    int count = rng.poisson(mean_per_sector);
    for (int k = 0; k < count; ++k) {
      UserEquipment ue;
      ue.id = id++;
      ue.sector = bs.id;
      ue.pos = bs.pos + sample_sector_point(rng, layout.isd_m, sector_local,
                                            layout.sectors_per_site,
                                            min_dist_m);
      ue.height_m = height_m;
      ues.push_back(ue);
    }
  }
  return ues;
}

WifiDrop drop_wifi(const NetworkLayout& layout, const WifiDropParams& params,
                   std::uint64_t drop_seed) {
  if (params.clusters_per_sector < 0)
    throw std::invalid_argument("drop_wifi: clusters_per_sector must be >= 0");
  if (params.radius_m < 0)
    throw std::invalid_argument("drop_wifi: radius_m must be >= 0");

  WifiDrop out;
  int device_id = 0;
  int cluster_id = 0;
  for (const BaseStation& bs : layout.bss) {
    const int sector_local = bs.id % layout.sectors_per_site;
    Rng rng = entity_rng(drop_seed, Stream::wifi_drop,
                         static_cast<std::uint64_t>(bs.id));
    for (int c = 0; c < params.clusters_per_sector; ++c) {
      WifiCluster cluster;
      cluster.id = cluster_id++;
      cluster.sector = bs.id;
      cluster.radius_m = params.radius_m;
      cluster.center =
          bs.pos + sample_sector_point(rng, layout.isd_m, sector_local,
                                       layout.sectors_per_site,
                                       params.min_center_dist_m);
      out.clusters.push_back(cluster);

      // 1 AP + N STAs, all uniform in the disc.
      for (int d = 0; d < 1 + params.stas_per_cluster; ++d) {
        WiFiDevice dev;
        dev.id = device_id++;
        dev.kind = (d == 0) ? WifiKind::ap : WifiKind::sta;
        dev.cluster = cluster.id;
        dev.sector = bs.id;
        double rr = params.radius_m * std::sqrt(rng.uniform());
        double th = rng.uniform(0.0, 2.0 * kPi);
        dev.pos = cluster.center + Vec2{rr * std::cos(th), rr * std::sin(th)};
        dev.height_m = params.height_m;
        dev.tx_power_dbm =
            (d == 0) ? params.ap_power_dbm : params.sta_power_dbm;
        out.devices.push_back(dev);
      }
    }
  }

  // Tag each STA with its nearest AP (wrap distance, ties to lowest id).
  std::vector<int> ap_ids;
  for (const WiFiDevice& d : out.devices)
    if (d.kind == WifiKind::ap) ap_ids.push_back(d.id);
  for (WiFiDevice& d : out.devices) {
    if (d.kind == WifiKind::ap) {
      d.serving_ap = d.id;
      continue;
    }
    double best = -1.0;
    for (int ap : ap_ids) {
      double dist = wrap_distance(layout, d.pos, out.devices[ap].pos);
      if (best < 0.0 || dist < best - 1e-12) {
        best = dist;
        d.serving_ap = ap;
      }
    }
  }
  return out;
}

void associate_ues(std::vector<UserEquipment>& ues,
                   const Eigen::MatrixXd& gain) {
  if (gain.cols() != static_cast<Eigen::Index>(ues.size()))
    throw std::invalid_argument("associate_ues: gain columns != UE count");
  for (std::size_t u = 0; u < ues.size(); ++u) {
    int best_bs = 0;
    double best_gain = gain(0, u);
    for (Eigen::Index b = 1; b < gain.rows(); ++b) {
      if (gain(b, u) > best_gain) {  // strict: ties keep the lowest id
        best_gain = gain(b, u);
        best_bs = static_cast<int>(b);
      }
    }
    ues[u].serving_bs = best_bs;
  }
}

}  // namespace mmimou
