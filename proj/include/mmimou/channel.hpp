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
#include <vector>

#include <Eigen/Dense>

#include "mmimou/geom.hpp"
#include "mmimou/rng.hpp"
#include "mmimou/topology.hpp"

namespace mmimou {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// ---------------------------------------------------------------------------
// Propagation models
//
// Macro links (BS-UE and BS-Wi-Fi) follow the standard urban-macro pathloss
// with distinct LOS/NLOS branches and a distance-dependent LOS probability.
// Device-to-device links (Wi-Fi to UE) use the street-level model with both
// ends at ~1.5 m. All model constants below are overridable via config.
// ---------------------------------------------------------------------------

struct MacroPathLossParams {
  double bs_height_m = 25.0;
  double ue_height_m = 1.5;
  double street_width_m = 20.0;
  double building_height_m = 20.0;
  double floor_m = 10.0;  // distances below this are clamped
};

// Urban-macro pathloss in dB at 3-D distance d3d_m. LOS uses the dual-slope
// form with breakpoint 4*(h_bs-1)*(h_ue-1)*f/c; NLOS the full empirical fit.
double macro_path_loss_db(double d3d_m, double fc_ghz, bool los,
                          const MacroPathLossParams& p = {});

// LOS probability for macro links at 2-D distance d2d_m.
double macro_los_probability(double d2d_m);

struct D2dPathLossParams {
  double height_m = 1.5;
  double floor_m = 3.0;
};

// Street-level device-to-device pathloss in dB (both ends ~1.5 m). The LOS
// branch is dual-slope with breakpoint 4*(h-1)^2*f/c; the NLOS branch uses
// the below-rooftop empirical fit for 1.5 m antennas.
double d2d_path_loss_db(double d_m, double fc_ghz, bool los,
                        const D2dPathLossParams& p = {});

// LOS probability for street-level links at 2-D distance d2d_m.
double d2d_los_probability(double d2d_m);

// Single-element directional pattern: quadratic rolloff in azimuth and
// elevation (3 dB beamwidth `beamwidth_deg` in both planes), each plane
// clipped at backlobe_db, combined and clipped again, plus max_gain_dbi.
double element_gain_dbi(double az_off_deg, double el_off_deg,
                        double beamwidth_deg = 65.0, double max_gain_dbi = 8.0,
                        double backlobe_db = 30.0);

// Distance-dependent Ricean K factor in dB: k0 - slope * d2d.
double ricean_k_db(double d2d_m, double k0_db = 13.0,
                   double slope_db_m = 0.03);

// Uniform linear array response for a ray at azimuth theta (radians from
// array broadside), half-wavelength spacing: entry n = exp(-j*pi*n*sin(theta)).
CVec steering_vector(int n_antennas, double theta_rad);

// Ricean small-scale vector: sqrt(K/(K+1)) * los + sqrt(1/(K+1)) * w with
// w ~ CN(0, I). Unit average energy per entry.
CVec fast_fading_vector(int n_antennas, double k_db, const CVec& los, Rng& rng);

// Scalar Ricean coefficient; the deterministic component gets a random
// phase (draw order: 1 uniform for the phase, then 1 complex normal).
std::complex<double> fast_fading_scalar(double k_db, Rng& rng);

// ---------------------------------------------------------------------------
// Per-drop channel realization
// ---------------------------------------------------------------------------

enum class LinkKind : std::uint64_t { bs_ue = 1, bs_wifi = 2, wifi_ue = 3 };

struct SlowFading {
  double path_loss_db = 0.0;
  double shadowing_db = 0.0;
  double antenna_gain_dbi = 0.0;
  bool los = false;
  // Linear power gain: antenna gain minus pathloss minus shadowing.
  double gain() const {
    return db_to_lin(antenna_gain_dbi - path_loss_db - shadowing_db);
  }
};

struct ChannelParams {
  double carrier_ghz = 5.15;
  MacroPathLossParams macro;
  D2dPathLossParams d2d;
  double downtilt_deg = 12.0;
  double max_gain_dbi = 8.0;
  double beamwidth_deg = 65.0;
  double backlobe_db = 30.0;
  double k0_db = 13.0;
  double k_slope_db_m = 0.03;
  double shadow_macro_los_db = 4.0;
  double shadow_macro_nlos_db = 6.0;
  double shadow_d2d_los_db = 3.0;
  double shadow_d2d_nlos_db = 7.0;
};

// Slow fading of one link, drawn from its own stream so the value does not
// depend on which other links are realized. Draw order: 1 uniform (LOS
// state), 1 normal (shadowing).
SlowFading slow_fading_link(const NetworkLayout& layout, LinkKind kind,
                            const BaseStation* bs, Vec2 from_pos,
                            double from_h, Vec2 to_pos, double to_h,
                            const ChannelParams& cp, std::uint64_t drop_seed,
                            std::uint64_t link_key);

// Full channel state for one coherence interval. Entries compose slow and
// fast fading: every coefficient equals sqrt(slow gain) * fast fading.
struct ChannelSet {
  int n_antennas = 0;
  int n_bs = 0;
  int n_ue = 0;
  int n_wifi = 0;

  // Slow-fading tables for all pairs (row-major [a * count_b + b]).
  std::vector<SlowFading> slow_bs_ue;
  std::vector<SlowFading> slow_bs_wifi;
  std::vector<SlowFading> slow_wifi_ue;

  // Composed fast channels. h/g: one matrix per BS, antennas x columns.
  // UE-side objects only cover the realized subset (see ue_cols).
  std::vector<CMat> h;              // per BS: antennas x realized UEs
  std::vector<CMat> g;              // per BS: antennas x all Wi-Fi devices
  CMat q;                           // all Wi-Fi devices x realized UEs

  std::vector<int> ue_cols;         // global UE id -> column, or -1
  std::vector<int> realized_ues;    // column -> global UE id

  const SlowFading& sf_bs_ue(int bs, int ue) const {
    return slow_bs_ue[static_cast<std::size_t>(bs) * n_ue + ue];
  }
  const SlowFading& sf_bs_wifi(int bs, int w) const {
    return slow_bs_wifi[static_cast<std::size_t>(bs) * n_wifi + w];
  }
  const SlowFading& sf_wifi_ue(int w, int ue) const {
    return slow_wifi_ue[static_cast<std::size_t>(w) * n_ue + ue];
  }
  double h_bar(int bs, int ue) const { return sf_bs_ue(bs, ue).gain(); }
  double g_bar(int bs, int w) const { return sf_bs_wifi(bs, w).gain(); }
  double q_bar(int w, int ue) const { return sf_wifi_ue(w, ue).gain(); }

  bool ue_realized(int ue) const { return ue_cols[ue] >= 0; }
  // Composed BS->UE channel vector (throws if the UE was not realized).
  CVec h_vec(int bs, int ue) const;
  std::complex<double> q_coef(int w, int ue) const;

  // Slow-fading gain matrix (n_bs x n_ue), used for association/selection.
  Eigen::MatrixXd bs_ue_gain_matrix() const;
};

// Realize all channels for one coherence interval. If ue_ids is empty the
// fast fading is materialized for every UE; otherwise only for the listed
// UEs (slow-fading tables always cover all pairs). Because every link has
// its own random stream, a subset realization equals the corresponding
// slice of the full one bit for bit.
ChannelSet realize_channels(const NetworkLayout& layout,
                            const std::vector<UserEquipment>& ues,
                            const std::vector<WiFiDevice>& wifi,
                            const ChannelParams& cp, std::uint64_t drop_seed,
                            const std::vector<int>& ue_ids = {});

}  // namespace mmimou
