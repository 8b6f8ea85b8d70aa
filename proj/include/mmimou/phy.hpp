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

#include "mmimou/channel.hpp"
#include "mmimou/subspace.hpp"

namespace mmimou {

// ---------------------------------------------------------------------------
// Listen-before-talk
// ---------------------------------------------------------------------------

struct LbtOutcome {
  bool passed = false;
  double measured_mw = 0.0;   // mean sensed power across the snapshots
  double threshold_dbm = -62.0;
};

// Plain energy detection: mean over snapshots of ||z||^2 against the
// threshold. Averaging over several symbol snapshots realizes the
// expectation over Wi-Fi symbols; deferral timing is not simulated.
LbtOutcome conventional_lbt(const std::vector<IdleSnapshot>& snaps,
                            double gamma_dbm);

// Enhanced energy detection: the sensed signal is first projected onto the
// complement of the nulled subspace, mean ||pi_perp z||^2 < gamma. With
// d = 0 this calls conventional_lbt on the same snapshots, so the two are
// bitwise identical in that case.
LbtOutcome enhanced_lbt(const ProjectorPair& proj,
                        const std::vector<IdleSnapshot>& snaps,
                        double gamma_dbm);

// ---------------------------------------------------------------------------
// Uplink pilots and channel estimation
// ---------------------------------------------------------------------------

// Orthonormal pilot codebook (unitary DFT of size m_p; columns are the
// sequences) plus the per-cell index assignment. Every cell draws distinct
// indices for its served UEs; the codebook itself is reused in all cells.
struct PilotBook {
  CMat seq;                                   // m_p x m_p, seq^H seq = I
  std::vector<std::vector<int>> assignment;   // [cell][served slot] -> index
};

PilotBook make_pilot_book(int m_p);

// Random per-cell assignment: a fresh permutation of 0..m_p-1 per cell per
// drop, truncated to that cell's served count. Throws std::invalid_argument
// if any cell serves more UEs than m_p.
void assign_pilots(PilotBook& book, const std::vector<int>& served_counts,
                   std::uint64_t drop_seed);

// Open-loop uplink power control with cap:
//   P = min(p_max_dbm, p0_dbm - alpha * gain_db)
// where gain_db is the slow-fading gain toward the serving BS in dB
// (a fractional compensation of the slow-fading attenuation).
double uplink_pilot_power_dbm(double slow_gain_linear, double p_max_dbm,
                              double p0_dbm, double alpha);

// One served UE as seen during the pilot phase.
struct PilotUe {
  int ue = -1;
  int cell = -1;
  int pilot = -1;       // codebook index
  double power_mw = 0;  // uplink pilot power
};

// Received pilot block at base station `bs` (antennas x m_p):
//   Y = sum_ue sqrt(P_ue) h_ue v_ue^T + sum_{l active} sqrt(P_l) g_l s_l^T + N
// with fresh unit-variance Wi-Fi symbols and listening noise sigma_eta_mw.
// Pilots collide across cells (index reuse), so co-pilot channels add up:
// pilot contamination is fully represented. Draw order: per active device
// (ascending id) m_p complex symbol normals, then antennas*m_p noise
// normals, column-major.
CMat received_pilot_block(int bs, const std::vector<PilotUe>& pilot_ues,
                          const std::vector<int>& active_ids,
                          const std::vector<WiFiDevice>& devices,
                          const ChannelSet& channels, const PilotBook& book,
                          double sigma_eta_mw, Rng& rng);

struct CsiEstimate {
  CMat h_hat;    // antennas x served: pi_perp Y v*, per served UE
  CMat h_norm;   // h_hat with column k divided by the UE's slow-fading gain
};

// Correlate the pilot block against each served UE's sequence and project
// onto the transmit-eligible subspace. served lists (ue, pilot) pairs;
// slow_gain[k] is the serving-link slow-fading gain used to normalize
// column k (must be > 0).
CsiEstimate estimate_ue_channels(const CMat& y_block, const PilotBook& book,
                                 const std::vector<PilotUe>& served,
                                 const ProjectorPair& proj,
                                 const std::vector<double>& slow_gain);

// ---------------------------------------------------------------------------
// Precoding and link metrics
// ---------------------------------------------------------------------------

struct PrecoderState {
  CMat w;              // antennas x k, total power sum_k ||w_k||^2 = 1
  double zeta = 0.0;   // normalization applied to the raw pseudoinverse
  bool failed = false; // Gram matrix condition number above the bound
};

// Zero-forcing precoder W = H (H^H H)^{-1} scaled to unit total power.
// If cond(H^H H) exceeds cond_bound the precoder is marked failed (the
// cell stays silent this interval).
PrecoderState zf_precoder(const CMat& h_columns, double cond_bound = 1e12);

// Transmission state of one cell during the data phase.
struct TxState {
  bool transmitting = false;
  CMat w;                    // valid when transmitting
  std::vector<int> served;   // global UE ids, column order of w
};

// Downlink SINR of `ue` served by `serving_bs` (which must be transmitting):
// desired beam power over intra-cell leakage + inter-cell leakage from other
// transmitting cells + active Wi-Fi interference + noise_mw. pb_mw is the
// per-cell transmit power. Expectation over data symbols: cross terms vanish,
// each beam contributes pb_mw |h^H w|^2.
double ue_sinr(int ue, int serving_bs, const std::vector<TxState>& tx,
               const ChannelSet& channels, const std::vector<int>& active_ids,
               const std::vector<WiFiDevice>& devices, double noise_mw,
               double pb_mw);

// Aggregate cellular interference at Wi-Fi device `w` from all transmitting
// cells: sum_i pb_mw sum_k |g_i^H w_ik|^2 (mW).
double wifi_interference_mw(int w, const std::vector<TxState>& tx,
                            const ChannelSet& channels, double pb_mw);

// Shannon rate gated by medium access: granted * bw_hz * log2(1 + sinr).
double ue_rate_bps(double sinr, bool granted, double bw_hz);

}  // namespace mmimou
