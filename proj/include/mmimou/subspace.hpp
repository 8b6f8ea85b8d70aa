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

namespace mmimou {

// One idle-mode antenna snapshot: the array output while the cell is silent
// and Wi-Fi devices transmit, z = sum_l sqrt(P_l) g_l s_l + eta.
struct IdleSnapshot {
  CVec z;
};

// Draw one snapshot at base station `bs`: unit-variance complex symbols for
// the active devices, listening noise of power sigma_eta_mw per antenna.
// Draw order: one complex normal per active device (ascending device id),
// then n_antennas complex normals for the noise.
IdleSnapshot sample_idle_signal(int bs, const std::vector<int>& active_ids,
                                const std::vector<WiFiDevice>& devices,
                                const ChannelSet& channels,
                                double sigma_eta_mw, Rng& rng);

// Eigen-structure of an (estimated or analytic) idle-signal covariance.
struct CovarianceEstimate {
  CMat z_hat;                  // Hermitian-symmetrized covariance, mW units
  CMat eigvecs;                // unitary, columns sorted with eigvals
  Eigen::VectorXd eigvals;     // descending; ties keep ascending original index
  int sample_count = 0;        // snapshots used; 0 = analytic (no rank bound)
};

// Sample covariance (1/M) sum z z^H of the given snapshots, symmetrized and
// eigendecomposed. Throws std::invalid_argument on an empty list.
CovarianceEstimate estimate_covariance(const std::vector<IdleSnapshot>& snaps);

// Analytic covariance under the configured traffic law:
// Z = sum_l p_l P_l g_l g_l^H + sigma_eta_mw * I, with p_l the activity
// probability of device l. sample_count is 0 (no estimation rank bound).
CovarianceEstimate exact_covariance(int bs,
                                    const std::vector<WiFiDevice>& devices,
                                    const ChannelSet& channels,
                                    const std::vector<double>& activity_prob,
                                    double sigma_eta_mw);

// Decompose an externally assembled covariance (symmetrize + sorted eigen).
CovarianceEstimate decompose_covariance(const CMat& z, int sample_count);

// Dominant-subspace basis and the associated projector pair.
struct ProjectorPair {
  CMat sigma;     // n x d basis of the dominant subspace
  CMat pi;        // projector onto it: sigma sigma^H
  CMat pi_perp;   // complement: I - pi
  int dims = 0;   // d

  static ProjectorPair identity_complement(int n);  // d = 0: pi_perp = I
};

// Take the d leading eigenvectors. Requires 0 <= d <= n and, when the
// covariance was estimated from M snapshots, d <= M (an M-sample estimate
// has rank at most M, so no more than M directions are identifiable).
ProjectorPair dominant_subspace(const CovarianceEstimate& cov, int d);

}  // namespace mmimou
