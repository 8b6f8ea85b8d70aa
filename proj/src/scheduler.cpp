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

#include "mmimou/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mmimou {

DofAllocation allocate_dof(int n, int k_target, int cov_samples,
                           DofPolicy policy, int d_fixed) {
  if (n < 1 || k_target < 0)
    throw std::invalid_argument("allocate_dof: bad n or k_target");
  if (k_target > n)
    throw std::invalid_argument(
        "allocate_dof: k_target exceeds the antenna count");
  DofAllocation a;
  a.k = k_target;
  int d = 0;
  switch (policy) {
    case DofPolicy::half_excess:
      d = static_cast<int>(std::lround(0.5 * (n - k_target)));
      break;
    case DofPolicy::fixed:
      if (d_fixed < 0)
        throw std::invalid_argument("allocate_dof: d_fixed not set");
      d = d_fixed;
      break;
  }
  d = std::min(d, n - k_target);
  if (cov_samples > 0) d = std::min(d, cov_samples);
  a.d = std::max(d, 0);
  return a;
}

double ue_selection_metric(double pb_mw, double h_serving,
                           const std::vector<double>& h_others,
                           const std::vector<double>& ap_rx_mw) {
  if (pb_mw < 0.0 || h_serving < 0.0)
    throw std::invalid_argument("ue_selection_metric: negative power");
  double denom = 0.0;
  for (double h : h_others) denom += pb_mw * h;
  for (double p : ap_rx_mw) denom += p;
  double num = pb_mw * h_serving;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return num / denom;
}

SelectionReport select_ues(const std::vector<int>& ue_ids,
                           const std::vector<double>& metrics,
                           const std::vector<bool>& eligible, int k_i) {
  if (ue_ids.size() != metrics.size() || ue_ids.size() != eligible.size())
    throw std::invalid_argument("select_ues: input size mismatch");
  if (k_i < 0) throw std::invalid_argument("select_ues: k_i must be >= 0");

  SelectionReport rep;
  rep.entries.resize(ue_ids.size());
  std::vector<int> order;  // indices of eligible candidates
  for (std::size_t i = 0; i < ue_ids.size(); ++i) {
    rep.entries[i] = {ue_ids[i], metrics[i], eligible[i], false, -1};
    if (eligible[i]) order.push_back(static_cast<int>(i));
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (metrics[a] != metrics[b]) return metrics[a] > metrics[b];
    return ue_ids[a] < ue_ids[b];  // ties to the lowest UE id
  });
  for (std::size_t r = 0; r < order.size(); ++r) {
    rep.entries[order[r]].rank = static_cast<int>(r);
    if (r < static_cast<std::size_t>(k_i)) {
      rep.entries[order[r]].selected = true;
      rep.selected.push_back(ue_ids[order[r]]);
    }
  }
  rep.shortfall = std::max(0, k_i - static_cast<int>(rep.selected.size()));
  return rep;
}

}  // namespace mmimou
