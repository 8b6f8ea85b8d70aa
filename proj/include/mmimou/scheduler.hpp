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

#include <vector>

namespace mmimou {

// Split of the spatial degrees of freedom between served users (k) and
// radiation nulls kept toward the Wi-Fi subspace (d).
struct DofAllocation {
  int k = 0;
  int d = 0;
};

enum class DofPolicy {
  half_excess,  // d = round(0.5 * (n - k))
  fixed,        // d = d_fixed
};

// Allocate k user streams and d nulls out of n antennas. d is clamped to
// n - k (users need the rest) and, when cov_samples > 0, to cov_samples
// (an estimate from M snapshots identifies at most M directions).
// Throws std::invalid_argument if k_target > n or arguments are negative.
DofAllocation allocate_dof(int n, int k_target, int cov_samples,
                           DofPolicy policy, int d_fixed = -1);

// Scheduling metric of one UE: ratio of serving-BS slow-fading signal power
// to slow interference power, all terms in mW:
//   pb_mw * h_serving / (pb_mw * sum(h_others) + sum(ap_rx_mw)).
// ap_rx_mw lists P_l * q_bar over access points only (their STAs share the
// hotspot location, so APs proxy hotspot proximity). A zero denominator
// returns +infinity (an isolated UE ranks above everything).
double ue_selection_metric(double pb_mw, double h_serving,
                           const std::vector<double>& h_others,
                           const std::vector<double>& ap_rx_mw);

struct SelectionEntry {
  int ue = -1;
  double metric = 0.0;
  bool eligible = false;  // above receive sensitivity
  bool selected = false;
  int rank = -1;          // 0-based among eligible, -1 if not ranked
};

struct SelectionReport {
  std::vector<SelectionEntry> entries;  // one per candidate, input order
  std::vector<int> selected;            // UE ids, metric-descending
  int shortfall = 0;                    // k_i - |selected| when short
};

// Pick the top k_i eligible candidates by metric (ties to lowest UE id).
// Fewer eligible candidates than k_i selects them all and records the
// shortfall.
SelectionReport select_ues(const std::vector<int>& ue_ids,
                           const std::vector<double>& metrics,
                           const std::vector<bool>& eligible, int k_i);

}  // namespace mmimou
