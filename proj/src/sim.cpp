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

#include "mmimou/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "mmimou/channel.hpp"
#include "mmimou/phy.hpp"
#include "mmimou/scheduler.hpp"
#include "mmimou/subspace.hpp"

namespace mmimou {

std::vector<int> sample_wifi_activity(const std::vector<WifiCluster>& clusters,
                                      const std::vector<WiFiDevice>& devices,
                                      Rng& rng) {
  // Group member ids per cluster (devices are stored cluster-contiguous,
  // but don't rely on it).
  std::vector<std::vector<int>> members(clusters.size());
  for (const WiFiDevice& d : devices)
    members.at(d.cluster).push_back(d.id);
  std::vector<int> active;
  for (const auto& m : members) {
    if (m.empty()) continue;
    active.push_back(m[rng.integer(m.size())]);
  }
  return active;
}

double wifi_sector_rate_mbps(const std::vector<double>& cluster_worst_mw,
                             double gamma_dbm, double per_cluster_mbps) {
  const double gamma_mw = db_to_lin(gamma_dbm);
  double rate = 0.0;
  for (double worst : cluster_worst_mw)
    if (worst < gamma_mw) rate += per_cluster_mbps;
  return rate;
}

std::uint64_t drop_seed(std::uint64_t master, int index) {
  return mix(master, 0x64726f70ull, static_cast<std::uint64_t>(index));
}

namespace {

ChannelParams channel_params_from(const SimConfig& cfg) {
  ChannelParams cp;
  cp.carrier_ghz = cfg.carrier_ghz;
  cp.macro.bs_height_m = cfg.bs_height_m;
  cp.macro.ue_height_m = cfg.device_height_m;
  cp.macro.floor_m = cfg.macro_floor_m;
  cp.d2d.height_m = cfg.device_height_m;
  cp.d2d.floor_m = cfg.d2d_floor_m;
  cp.downtilt_deg = cfg.bs_downtilt_deg;
  cp.max_gain_dbi = cfg.bs_max_gain_dbi;
  cp.beamwidth_deg = cfg.bs_beamwidth_deg;
  cp.backlobe_db = cfg.bs_backlobe_db;
  cp.k0_db = cfg.ricean_k0_db;
  cp.k_slope_db_m = cfg.ricean_k_slope_db_m;
  cp.shadow_macro_los_db = cfg.shadow_macro_los_db;
  cp.shadow_macro_nlos_db = cfg.shadow_macro_nlos_db;
  cp.shadow_d2d_los_db = cfg.shadow_d2d_los_db;
  cp.shadow_d2d_nlos_db = cfg.shadow_d2d_nlos_db;
  return cp;
}

// Width of the nulled subspace for one cell under the configured policy.
int null_width(const SimConfig& cfg, const CovarianceEstimate& cov,
               double sigma_eta_mw) {
  const int n = cfg.bs_antennas;
  const int k = cfg.k_ues;
  if (cfg.scheme == "conventional") return 0;
  const int bound = cov.sample_count;  // 0 = analytic, no rank bound
  if (cfg.d_policy == "rank_cover") {
    // Cover every eigendirection that stands clear of the listening noise
    // floor, capped by the budget left after the served streams.
    const double thresh =
        sigma_eta_mw * db_to_lin(cfg.rank_threshold_over_noise_db);
    int rank = 0;
    for (int i = 0; i < cov.eigvals.size(); ++i)
      if (cov.eigvals(i) > thresh) ++rank;
    int d = std::min(rank, n - k);
    if (bound > 0) d = std::min(d, bound);
    return d;
  }
  DofPolicy policy = (cfg.d_policy == "fixed") ? DofPolicy::fixed
                                               : DofPolicy::half_excess;
  return allocate_dof(n, k, bound, policy, cfg.d_fixed).d;
}

}  // namespace

DropMetrics run_drop(const SimConfig& cfg, std::uint64_t seed) {
  try {
    validate_config(cfg);

    BsParams bsp;
    bsp.antennas = cfg.bs_antennas;
    bsp.height_m = cfg.bs_height_m;
    bsp.downtilt_deg = cfg.bs_downtilt_deg;
    bsp.tx_power_dbm = cfg.bs_tx_power_dbm;
    NetworkLayout layout =
        build_layout(cfg.sites, cfg.isd_m, cfg.sectors_per_site, bsp);
    const int n_bs = static_cast<int>(layout.bss.size());

    std::vector<UserEquipment> ues =
        drop_ues(layout, cfg.ue_mean_per_sector, cfg.min_bs_dist_m,
                 cfg.device_height_m, seed);

    WifiDropParams wdp;
    wdp.clusters_per_sector = cfg.wifi_clusters_per_sector;
    wdp.radius_m = cfg.wifi_cluster_radius_m;
    wdp.stas_per_cluster = cfg.stas_per_cluster;
    wdp.ap_power_dbm = cfg.ap_power_dbm;
    wdp.sta_power_dbm = cfg.sta_power_dbm;
    wdp.height_m = cfg.device_height_m;
    wdp.min_center_dist_m = cfg.min_bs_dist_m + cfg.wifi_cluster_radius_m;
    WifiDrop wifi = drop_wifi(layout, wdp, seed);
    const int n_wifi = static_cast<int>(wifi.devices.size());

    const ChannelParams cp = channel_params_from(cfg);
    const double pb_mw = cfg.bs_tx_power_mw();
    const double sigma_eta_mw = cfg.bs_noise_mw();
    const double noise_ue_mw = cfg.ue_noise_mw();

    // Slow fading decides association and selection before any fast fading
    // is needed, so realize channels in two steps: first a slow-only pass
    // (via a throwaway full realization would be wasteful), done here by
    // computing the slow tables through realize_channels with an empty
    // UE subset, then re-using them.
    // -- user selection (slow-fading quantities only) ----------------------
    ChannelSet chan = realize_channels(layout, ues, wifi.devices, cp, seed,
                                       std::vector<int>{-1}.empty()
                                           ? std::vector<int>{}
                                           : std::vector<int>{});
    // (fast fading for all UEs is realized lazily below; see subset call)

    Eigen::MatrixXd gain = chan.bs_ue_gain_matrix();
    associate_ues(ues, gain);

    // Per-cell candidate lists.
    std::vector<std::vector<int>> cell_ues(n_bs);
    for (const UserEquipment& ue : ues) cell_ues[ue.serving_bs].push_back(ue.id);

    std::vector<int> ap_ids;
    for (const WiFiDevice& d : wifi.devices)
      if (d.kind == WifiKind::ap) ap_ids.push_back(d.id);

    const double sens_mw = db_to_lin(cfg.ue_sensitivity_dbm);
    std::vector<std::vector<int>> selected(n_bs);
    for (int b = 0; b < n_bs; ++b) {
      std::vector<int> ids = cell_ues[b];
      std::vector<double> metrics(ids.size());
      std::vector<bool> eligible(ids.size());
      for (std::size_t i = 0; i < ids.size(); ++i) {
        int u = ids[i];
        std::vector<double> h_others;
        h_others.reserve(n_bs - 1);
        for (int ob = 0; ob < n_bs; ++ob)
          if (ob != b) h_others.push_back(gain(ob, u));
        std::vector<double> ap_rx;
        ap_rx.reserve(ap_ids.size());
        for (int ap : ap_ids)
          ap_rx.push_back(db_to_lin(wifi.devices[ap].tx_power_dbm) *
                          chan.q_bar(ap, u));
        metrics[i] = ue_selection_metric(pb_mw, gain(b, u), h_others, ap_rx);
        eligible[i] = pb_mw * gain(b, u) >= sens_mw;
      }
      selected[b] = select_ues(ids, metrics, eligible, cfg.k_ues).selected;
    }

    // -- fast fading for the links that carry signals ----------------------
    std::vector<int> union_selected;
    for (const auto& s : selected)
      union_selected.insert(union_selected.end(), s.begin(), s.end());
    std::sort(union_selected.begin(), union_selected.end());
    if (union_selected.empty() && !ues.empty())
      union_selected.push_back(ues[0].id);  // keep shapes non-degenerate
    chan = realize_channels(layout, ues, wifi.devices, cp, seed,
                            union_selected);

    // -- current Wi-Fi traffic state ---------------------------------------
    Rng act_rng = phase_rng(seed, Stream::activity);
    std::vector<int> active = sample_wifi_activity(wifi.clusters, wifi.devices,
                                                   act_rng);
    for (int id : active) wifi.devices[id].active = true;

    // -- covariance acquisition and nulling --------------------------------
    const bool enhanced = (cfg.scheme == "mmimo_u");
    std::vector<ProjectorPair> proj(n_bs);
    for (int b = 0; b < n_bs; ++b) {
      if (!enhanced) {
        proj[b] = ProjectorPair::identity_complement(cfg.bs_antennas);
        continue;
      }
      CovarianceEstimate cov;
      if (cfg.cov_mode == "exact") {
        // Expectation over the traffic law: each device talks for an equal
        // share of its cluster's airtime.
        std::vector<double> prob(n_wifi, 0.0);
        for (const WiFiDevice& d : wifi.devices)
          prob[d.id] = 1.0 / (1.0 + cfg.stas_per_cluster);
        cov = exact_covariance(b, wifi.devices, chan, prob, sigma_eta_mw);
      } else {
        Rng cov_rng = entity_rng(seed, Stream::covariance,
                                 static_cast<std::uint64_t>(b));
        std::vector<IdleSnapshot> snaps;
        snaps.reserve(cfg.cov_samples);
        for (int m = 0; m < cfg.cov_samples; ++m) {
          std::vector<int> snap_active =
              sample_wifi_activity(wifi.clusters, wifi.devices, cov_rng);
          snaps.push_back(sample_idle_signal(b, snap_active, wifi.devices,
                                             chan, sigma_eta_mw, cov_rng));
        }
        cov = estimate_covariance(snaps);
      }
      proj[b] = dominant_subspace(cov, null_width(cfg, cov, sigma_eta_mw));
    }

    // -- listen-before-talk -------------------------------------------------
    DropMetrics dm;
    dm.seed = seed;
    dm.n_sectors = layout.sector_count();
    dm.bss.resize(n_bs);
    for (int b = 0; b < n_bs; ++b) {
      Rng lbt_rng = entity_rng(seed, Stream::lbt,
                               static_cast<std::uint64_t>(b));
      std::vector<IdleSnapshot> snaps;
      snaps.reserve(cfg.lbt_snapshots);
      for (int m = 0; m < cfg.lbt_snapshots; ++m)
        snaps.push_back(sample_idle_signal(b, active, wifi.devices, chan,
                                           sigma_eta_mw, lbt_rng));
      LbtOutcome lbt = enhanced ? enhanced_lbt(proj[b], snaps, cfg.gamma_lbt_dbm)
                                : conventional_lbt(snaps, cfg.gamma_lbt_dbm);
      dm.bss[b].bs = b;
      dm.bss[b].lbt_passed = lbt.passed;
      dm.bss[b].lbt_mw = lbt.measured_mw;
      dm.bss[b].served = static_cast<int>(selected[b].size());
    }

    // -- uplink pilots, estimation, precoding -------------------------------
    PilotBook book = make_pilot_book(cfg.pilot_length);
    std::vector<int> served_counts(n_bs);
    for (int b = 0; b < n_bs; ++b)
      served_counts[b] = static_cast<int>(selected[b].size());
    assign_pilots(book, served_counts, seed);

    std::vector<PilotUe> all_pilot_ues;
    std::vector<std::vector<PilotUe>> cell_pilot_ues(n_bs);
    for (int b = 0; b < n_bs; ++b) {
      for (std::size_t k = 0; k < selected[b].size(); ++k) {
        PilotUe pu;
        pu.ue = selected[b][k];
        pu.cell = b;
        pu.pilot = book.assignment[b][k];
        pu.power_mw = db_to_lin(uplink_pilot_power_dbm(
            chan.h_bar(b, pu.ue), cfg.p_max_dbm, cfg.p0_dbm, cfg.pc_alpha));
        all_pilot_ues.push_back(pu);
        cell_pilot_ues[b].push_back(pu);
      }
    }

    std::vector<TxState> tx(n_bs);
    for (int b = 0; b < n_bs; ++b) {
      if (selected[b].empty()) continue;  // nothing to send
      Rng prx_rng = entity_rng(seed, Stream::pilot_rx,
                               static_cast<std::uint64_t>(b));
      CMat y = received_pilot_block(b, all_pilot_ues, active, wifi.devices,
                                    chan, book, sigma_eta_mw, prx_rng);
      std::vector<double> slow(selected[b].size());
      for (std::size_t k = 0; k < selected[b].size(); ++k)
        slow[k] = chan.h_bar(b, selected[b][k]);
      CsiEstimate est =
          estimate_ue_channels(y, book, cell_pilot_ues[b], proj[b], slow);
      PrecoderState pre = zf_precoder(est.h_norm, cfg.zf_condition_bound);
      dm.bss[b].precoder_failed = pre.failed;
      if (pre.failed) continue;
      bool granted = dm.bss[b].lbt_passed || cfg.force_transmit;
      if (!granted) continue;
      tx[b].transmitting = true;
      tx[b].w = pre.w;
      tx[b].served = selected[b];
      dm.bss[b].transmitting = true;
    }

    // -- downlink metrics ----------------------------------------------------
    for (int b = 0; b < n_bs; ++b) {
      for (int u : selected[b]) {
        DropMetrics::UeRecord rec;
        rec.ue = u;
        rec.bs = b;
        if (tx[b].transmitting) {
          rec.sinr = ue_sinr(u, b, tx, chan, active, wifi.devices,
                             noise_ue_mw, pb_mw);
          rec.rate_bps = ue_rate_bps(rec.sinr, true, cfg.bandwidth_hz);
        }
        dm.ues.push_back(rec);
      }
    }

    dm.wifi_interference_mw.resize(n_wifi, 0.0);
    for (int w = 0; w < n_wifi; ++w)
      dm.wifi_interference_mw[w] = wifi_interference_mw(w, tx, chan, pb_mw);

    dm.sector_wifi_rate_mbps.assign(layout.sector_count(), 0.0);
    for (int s = 0; s < layout.sector_count(); ++s) {
      std::vector<double> cluster_worst;
      for (const WifiCluster& c : wifi.clusters) {
        if (c.sector != s) continue;
        double worst = 0.0;
        for (const WiFiDevice& d : wifi.devices)
          if (d.cluster == c.id)
            worst = std::max(worst, dm.wifi_interference_mw[d.id]);
        cluster_worst.push_back(worst);
      }
      dm.sector_wifi_rate_mbps[s] = wifi_sector_rate_mbps(
          cluster_worst, cfg.gamma_lbt_dbm, cfg.wifi_cluster_rate_mbps);
    }
    return dm;
  } catch (const std::exception& e) {
    throw std::runtime_error("run_drop(seed=" + std::to_string(seed) +
                             "): " + e.what());
  }
}

std::vector<DropMetrics> run_drops(const SimConfig& cfg) {
  std::vector<DropMetrics> out(cfg.drops);
  const int workers = std::max(1, std::min(cfg.threads, cfg.drops));
  if (workers == 1) {
    for (int i = 0; i < cfg.drops; ++i)
      out[i] = run_drop(cfg, drop_seed(cfg.seed, i));
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (;;) {
          int i = next.fetch_add(1);
          if (i >= cfg.drops) break;
          out[i] = run_drop(cfg, drop_seed(cfg.seed, i));
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
  return out;
}

double to_dbm_floored(double mw) {
  if (mw <= 0.0) return kDbFloor;
  return std::max(lin_to_db(mw), kDbFloor);
}

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  double pos = p * static_cast<double>(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

AggregateResult aggregate(const std::vector<DropMetrics>& drops) {
  if (drops.empty()) throw std::invalid_argument("aggregate: no drops");
  AggregateResult ag;
  ag.drop_count = static_cast<int>(drops.size());

  double rate_sum = 0.0;
  std::size_t cell_samples = 0;
  double wifi_sum = 0.0;
  std::size_t sector_samples = 0;
  std::size_t lbt_pass = 0;
  std::size_t lbt_total = 0;

  for (const DropMetrics& d : drops) {
    std::vector<double> cell_rate(d.bss.size(), 0.0);
    for (const auto& ue : d.ues) cell_rate[ue.bs] += ue.rate_bps;
    for (std::size_t b = 0; b < d.bss.size(); ++b) {
      rate_sum += cell_rate[b];
      ++cell_samples;
      ag.bs_lbt_dbm.push_back(to_dbm_floored(d.bss[b].lbt_mw));
      lbt_pass += d.bss[b].lbt_passed ? 1 : 0;
      ++lbt_total;
    }
    for (double r : d.sector_wifi_rate_mbps) {
      wifi_sum += r;
      ++sector_samples;
    }
    for (double mw : d.wifi_interference_mw)
      ag.wifi_interference_dbm.push_back(to_dbm_floored(mw));
    for (const auto& ue : d.ues)
      if (d.bss[ue.bs].transmitting)
        ag.ue_sinr_db.push_back(lin_to_db(std::max(ue.sinr, 1e-30)));
  }

  ag.cellular_rate_mean_bps =
      cell_samples ? rate_sum / static_cast<double>(cell_samples) : 0.0;
  ag.wifi_rate_mean_mbps =
      sector_samples ? wifi_sum / static_cast<double>(sector_samples) : 0.0;
  ag.lbt_pass_fraction =
      lbt_total ? static_cast<double>(lbt_pass) / static_cast<double>(lbt_total)
                : 0.0;
  std::sort(ag.wifi_interference_dbm.begin(), ag.wifi_interference_dbm.end());
  std::sort(ag.bs_lbt_dbm.begin(), ag.bs_lbt_dbm.end());
  std::sort(ag.ue_sinr_db.begin(), ag.ue_sinr_db.end());
  return ag;
}

}  // namespace mmimou
