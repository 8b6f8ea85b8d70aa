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

#include "mmimou/channel.hpp"

#include <cstdio>
#include <mutex>
#include <stdexcept>

namespace mmimou {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

void warn_floor_once(const char* model) {
  static std::once_flag macro_flag, d2d_flag;
  auto warn = [model]() {
    std::fprintf(stderr,
                 "warning: %s pathloss queried below its distance floor; "
                 "clamping to the floor (reported once per run)\n",
                 model);
  };
  if (model[0] == 'm')
    std::call_once(macro_flag, warn);
  else
    std::call_once(d2d_flag, warn);
}

}  // namespace

double macro_path_loss_db(double d3d_m, double fc_ghz, bool los,
                          const MacroPathLossParams& p) {
  if (d3d_m < p.floor_m) {
    warn_floor_once("macro");
    d3d_m = p.floor_m;
  }
  const double d = d3d_m;
  if (los) {
    // Dual slope around the effective-height breakpoint (environment
    // reference height 1 m at both ends).
    const double hb = p.bs_height_m - 1.0;
    const double hu = p.ue_height_m - 1.0;
    const double d_bp = 4.0 * hb * hu * (fc_ghz * 1e9) / kSpeedOfLight;
    if (d <= d_bp)
      return 22.0 * std::log10(d) + 28.0 + 20.0 * std::log10(fc_ghz);
    return 40.0 * std::log10(d) + 7.8 - 18.0 * std::log10(hb) -
           18.0 * std::log10(hu) + 2.0 * std::log10(fc_ghz);
  }
  // Below-rooftop empirical fit with street width, building height and
  // antenna heights as parameters.
  const double w = p.street_width_m;
  const double h = p.building_height_m;
  const double hb = p.bs_height_m;
  const double hu = p.ue_height_m;
  return 161.04 - 7.1 * std::log10(w) + 7.5 * std::log10(h) -
         (24.37 - 3.7 * (h / hb) * (h / hb)) * std::log10(hb) +
         (43.42 - 3.1 * std::log10(hb)) * (std::log10(d) - 3.0) +
         20.0 * std::log10(fc_ghz) -
         (3.2 * std::pow(std::log10(11.75 * hu), 2.0) - 4.97);
}

double macro_los_probability(double d2d_m) {
  if (d2d_m <= 0.0) return 1.0;
  double a = std::min(18.0 / d2d_m, 1.0);
  double e = std::exp(-d2d_m / 63.0);
  return a * (1.0 - e) + e;
}

double d2d_path_loss_db(double d_m, double fc_ghz, bool los,
                        const D2dPathLossParams& p) {
  if (d_m < p.floor_m) {
    warn_floor_once("d2d");
    d_m = p.floor_m;
  }
  const double d = d_m;
  if (los) {
    const double he = p.height_m - 1.0;  // effective height, 0.5 m at 1.5 m
    const double d_bp = 4.0 * he * he * (fc_ghz * 1e9) / kSpeedOfLight;
    if (d <= d_bp)
      return 22.7 * std::log10(d) + 27.0 + 20.0 * std::log10(fc_ghz);
    return 40.0 * std::log10(d) + 7.56 - 17.3 * std::log10(he) -
           17.3 * std::log10(he) + 2.7 * std::log10(fc_ghz);
  }
  const double h = p.height_m;
  return (44.9 - 6.55 * std::log10(h)) * std::log10(d) +
         5.83 * std::log10(h) + 14.78 + 34.97 * std::log10(fc_ghz);
}

double d2d_los_probability(double d2d_m) {
  if (d2d_m <= 0.0) return 1.0;
  double a = std::min(18.0 / d2d_m, 1.0);
  double e = std::exp(-d2d_m / 36.0);
  return a * (1.0 - e) + e;
}

double element_gain_dbi(double az_off_deg, double el_off_deg,
                        double beamwidth_deg, double max_gain_dbi,
                        double backlobe_db) {
  auto plane = [&](double off) {
    double x = off / beamwidth_deg;
    return std::min(12.0 * x * x, backlobe_db);
  };
  double att = std::min(plane(az_off_deg) + plane(el_off_deg), backlobe_db);
  return max_gain_dbi - att;
}

double ricean_k_db(double d2d_m, double k0_db, double slope_db_m) {
  return k0_db - slope_db_m * d2d_m;
}

CVec steering_vector(int n_antennas, double theta_rad) {
  if (n_antennas < 1)
    throw std::invalid_argument("steering_vector: n_antennas must be >= 1");
  CVec a(n_antennas);
  const double phase_step = -kPi * std::sin(theta_rad);
  for (int n = 0; n < n_antennas; ++n)
    a(n) = std::polar(1.0, phase_step * n);
  return a;
}

CVec fast_fading_vector(int n_antennas, double k_db, const CVec& los,
                        Rng& rng) {
  if (los.size() != n_antennas)
    throw std::invalid_argument("fast_fading_vector: los size mismatch");
  const double k = db_to_lin(k_db);
  const double c_los = std::sqrt(k / (k + 1.0));
  const double c_sc = std::sqrt(1.0 / (k + 1.0));
  CVec h(n_antennas);
  for (int n = 0; n < n_antennas; ++n) h(n) = c_sc * rng.cnormal();
  h += c_los * los;
  return h;
}

std::complex<double> fast_fading_scalar(double k_db, Rng& rng) {
  const double k = db_to_lin(k_db);
  const double c_los = std::sqrt(k / (k + 1.0));
  const double c_sc = std::sqrt(1.0 / (k + 1.0));
  double phase = rng.uniform(0.0, 2.0 * kPi);
  std::complex<double> sc = rng.cnormal();
  return c_los * std::polar(1.0, phase) + c_sc * sc;
}

namespace {

inline std::uint64_t link_key(LinkKind kind, int a, int b) {
  return (static_cast<std::uint64_t>(kind) << 48) |
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 24) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(b));
}

// Geometry of one link after wrap-around: planar/3-D distance and, for BS
// links, the pattern offsets relative to the sector boresight.
struct LinkGeometry {
  double d2d = 0.0;
  double d3d = 0.0;
  double az_off_deg = 0.0;
  double el_off_deg = 0.0;
  double theta_rad = 0.0;  // azimuth from array broadside
};

LinkGeometry link_geometry(const NetworkLayout& layout, const BaseStation* bs,
                           Vec2 from_pos, double from_h, Vec2 to_pos,
                           double to_h, double downtilt_deg) {
  LinkGeometry geo;
  Vec2 image = wrap_image(layout, from_pos, to_pos);
  Vec2 rel = image - from_pos;
  geo.d2d = rel.norm();
  double dh = to_h - from_h;
  geo.d3d = std::sqrt(geo.d2d * geo.d2d + dh * dh);
  if (bs != nullptr) {
    double az = rad2deg(std::atan2(rel.y, rel.x));
    geo.az_off_deg = wrap_deg(az - bs->azimuth_deg);
    double el = rad2deg(std::atan2(dh, geo.d2d));  // negative below horizon
    geo.el_off_deg = el + downtilt_deg;            // boresight at -downtilt
    geo.theta_rad = deg2rad(geo.az_off_deg);
  }
  return geo;
}

}  // namespace

SlowFading slow_fading_link(const NetworkLayout& layout, LinkKind kind,
                            const BaseStation* bs, Vec2 from_pos,
                            double from_h, Vec2 to_pos, double to_h,
                            const ChannelParams& cp, std::uint64_t drop_seed,
                            std::uint64_t key) {
  LinkGeometry geo = link_geometry(layout, bs, from_pos, from_h, to_pos, to_h,
                                   cp.downtilt_deg);
  Rng rng = entity_rng(drop_seed, Stream::slow_fading, key);

  SlowFading sf;
  const bool macro = (kind != LinkKind::wifi_ue);
  double p_los =
      macro ? macro_los_probability(geo.d2d) : d2d_los_probability(geo.d2d);
  sf.los = rng.uniform() < p_los;

  if (macro) {
    MacroPathLossParams mp = cp.macro;
    mp.ue_height_m = to_h;
    sf.path_loss_db = macro_path_loss_db(geo.d3d, cp.carrier_ghz, sf.los, mp);
    sf.shadowing_db = rng.normal() * (sf.los ? cp.shadow_macro_los_db
                                             : cp.shadow_macro_nlos_db);
    sf.antenna_gain_dbi =
        element_gain_dbi(geo.az_off_deg, geo.el_off_deg, cp.beamwidth_deg,
                         cp.max_gain_dbi, cp.backlobe_db);
  } else {
    sf.path_loss_db = d2d_path_loss_db(geo.d3d, cp.carrier_ghz, sf.los, cp.d2d);
    sf.shadowing_db =
        rng.normal() * (sf.los ? cp.shadow_d2d_los_db : cp.shadow_d2d_nlos_db);
    sf.antenna_gain_dbi = 0.0;  // omnidirectional at both ends
  }
  return sf;
}

CVec ChannelSet::h_vec(int bs, int ue) const {
  int col = ue_cols.at(ue);
  if (col < 0)
    throw std::out_of_range("ChannelSet::h_vec: UE fast fading not realized");
  return h[bs].col(col);
}

std::complex<double> ChannelSet::q_coef(int w, int ue) const {
  int col = ue_cols.at(ue);
  if (col < 0)
    throw std::out_of_range("ChannelSet::q_coef: UE fast fading not realized");
  return q(w, col);
}

Eigen::MatrixXd ChannelSet::bs_ue_gain_matrix() const {
  Eigen::MatrixXd m(n_bs, n_ue);
  for (int b = 0; b < n_bs; ++b)
    for (int u = 0; u < n_ue; ++u) m(b, u) = sf_bs_ue(b, u).gain();
  return m;
}

ChannelSet realize_channels(const NetworkLayout& layout,
                            const std::vector<UserEquipment>& ues,
                            const std::vector<WiFiDevice>& wifi,
                            const ChannelParams& cp, std::uint64_t drop_seed,
                            const std::vector<int>& ue_ids) {
  if (layout.bss.empty())
    throw std::invalid_argument("realize_channels: layout has no cells");
  ChannelSet cs;
  cs.n_bs = static_cast<int>(layout.bss.size());
  cs.n_ue = static_cast<int>(ues.size());
  cs.n_wifi = static_cast<int>(wifi.size());
  cs.n_antennas = layout.bss[0].antennas;
  if (cs.n_antennas < 1)
    throw std::invalid_argument("realize_channels: antenna count not set");

  // Slow fading for all pairs.
  cs.slow_bs_ue.resize(static_cast<std::size_t>(cs.n_bs) * cs.n_ue);
  cs.slow_bs_wifi.resize(static_cast<std::size_t>(cs.n_bs) * cs.n_wifi);
  cs.slow_wifi_ue.resize(static_cast<std::size_t>(cs.n_wifi) * cs.n_ue);
  for (int b = 0; b < cs.n_bs; ++b) {
    const BaseStation& bs = layout.bss[b];
    for (int u = 0; u < cs.n_ue; ++u)
      cs.slow_bs_ue[static_cast<std::size_t>(b) * cs.n_ue + u] =
          slow_fading_link(layout, LinkKind::bs_ue, &bs, bs.pos, bs.height_m,
                           ues[u].pos, ues[u].height_m, cp, drop_seed,
                           link_key(LinkKind::bs_ue, b, u));
    for (int w = 0; w < cs.n_wifi; ++w)
      cs.slow_bs_wifi[static_cast<std::size_t>(b) * cs.n_wifi + w] =
          slow_fading_link(layout, LinkKind::bs_wifi, &bs, bs.pos, bs.height_m,
                           wifi[w].pos, wifi[w].height_m, cp, drop_seed,
                           link_key(LinkKind::bs_wifi, b, w));
  }
  for (int w = 0; w < cs.n_wifi; ++w)
    for (int u = 0; u < cs.n_ue; ++u)
      cs.slow_wifi_ue[static_cast<std::size_t>(w) * cs.n_ue + u] =
          slow_fading_link(layout, LinkKind::wifi_ue, nullptr, wifi[w].pos,
                           wifi[w].height_m, ues[u].pos, ues[u].height_m, cp,
                           drop_seed, link_key(LinkKind::wifi_ue, w, u));

  // Fast fading: all Wi-Fi links, UE links only for the requested subset.
  cs.ue_cols.assign(cs.n_ue, -1);
  if (ue_ids.empty()) {
    cs.realized_ues.resize(cs.n_ue);
    for (int u = 0; u < cs.n_ue; ++u) cs.realized_ues[u] = u;
  } else {
    cs.realized_ues = ue_ids;
  }
  for (std::size_t c = 0; c < cs.realized_ues.size(); ++c)
    cs.ue_cols.at(cs.realized_ues[c]) = static_cast<int>(c);
  const int n_cols = static_cast<int>(cs.realized_ues.size());

  cs.h.assign(cs.n_bs, CMat(cs.n_antennas, n_cols));
  cs.g.assign(cs.n_bs, CMat(cs.n_antennas, cs.n_wifi));
  cs.q = CMat(cs.n_wifi, n_cols);

  auto bs_fast = [&](const BaseStation& bs, Vec2 pos, double h, LinkKind kind,
                     int a_id, int b_id, const SlowFading& sf) -> CVec {
    LinkGeometry geo = link_geometry(layout, &bs, bs.pos, bs.height_m, pos, h,
                                     cp.downtilt_deg);
    CVec los = steering_vector(cs.n_antennas, geo.theta_rad);
    Rng rng = entity_rng(drop_seed, Stream::fast_fading,
                         link_key(kind, a_id, b_id));
    CVec fast = fast_fading_vector(
        cs.n_antennas, ricean_k_db(geo.d2d, cp.k0_db, cp.k_slope_db_m), los,
        rng);
    return std::sqrt(sf.gain()) * fast;
  };

  for (int b = 0; b < cs.n_bs; ++b) {
    const BaseStation& bs = layout.bss[b];
    for (int c = 0; c < n_cols; ++c) {
      int u = cs.realized_ues[c];
      cs.h[b].col(c) = bs_fast(bs, ues[u].pos, ues[u].height_m,
                               LinkKind::bs_ue, b, u, cs.sf_bs_ue(b, u));
    }
    for (int w = 0; w < cs.n_wifi; ++w)
      cs.g[b].col(w) = bs_fast(bs, wifi[w].pos, wifi[w].height_m,
                               LinkKind::bs_wifi, b, w, cs.sf_bs_wifi(b, w));
  }
  for (int w = 0; w < cs.n_wifi; ++w) {
    for (int c = 0; c < n_cols; ++c) {
      int u = cs.realized_ues[c];
      double d = wrap_distance(layout, wifi[w].pos, ues[u].pos);
      Rng rng = entity_rng(drop_seed, Stream::fast_fading,
                           link_key(LinkKind::wifi_ue, w, u));
      std::complex<double> fast = fast_fading_scalar(
          ricean_k_db(d, cp.k0_db, cp.k_slope_db_m), rng);
      cs.q(w, c) = std::sqrt(cs.sf_wifi_ue(w, u).gain()) * fast;
    }
  }
  return cs;
}

}  // namespace mmimou
