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

#include "mmimou/phy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace mmimou {

LbtOutcome conventional_lbt(const std::vector<IdleSnapshot>& snaps,
                            double gamma_dbm) {
  if (snaps.empty())
    throw std::invalid_argument("conventional_lbt: no snapshots");
  double acc = 0.0;
  for (const IdleSnapshot& s : snaps) acc += s.z.squaredNorm();
  LbtOutcome out;
  out.measured_mw = acc / static_cast<double>(snaps.size());
  out.threshold_dbm = gamma_dbm;
  out.passed = out.measured_mw < db_to_lin(gamma_dbm);
  return out;
}

LbtOutcome enhanced_lbt(const ProjectorPair& proj,
                        const std::vector<IdleSnapshot>& snaps,
                        double gamma_dbm) {
  if (proj.dims == 0) return conventional_lbt(snaps, gamma_dbm);
  if (snaps.empty())
    throw std::invalid_argument("enhanced_lbt: no snapshots");
  double acc = 0.0;
  for (const IdleSnapshot& s : snaps)
    acc += (proj.pi_perp * s.z).squaredNorm();
  LbtOutcome out;
  out.measured_mw = acc / static_cast<double>(snaps.size());
  out.threshold_dbm = gamma_dbm;
  out.passed = out.measured_mw < db_to_lin(gamma_dbm);
  return out;
}

PilotBook make_pilot_book(int m_p) {
  if (m_p < 1) throw std::invalid_argument("make_pilot_book: m_p must be >= 1");
  PilotBook book;
  book.seq.resize(m_p, m_p);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m_p));
  for (int m = 0; m < m_p; ++m)
    for (int p = 0; p < m_p; ++p)
      book.seq(m, p) = scale * std::polar(1.0, -2.0 * kPi * m * p / m_p);
  return book;
}

void assign_pilots(PilotBook& book, const std::vector<int>& served_counts,
                   std::uint64_t drop_seed) {
  const int m_p = static_cast<int>(book.seq.cols());
  book.assignment.clear();
  for (std::size_t cell = 0; cell < served_counts.size(); ++cell) {
    if (served_counts[cell] > m_p)
      throw std::invalid_argument(
          "assign_pilots: a cell serves more UEs than there are sequences");
    Rng rng = entity_rng(drop_seed, Stream::pilot_assign,
                         static_cast<std::uint64_t>(cell));
    std::vector<int> perm(m_p);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = m_p - 1; i > 0; --i) {
      int j = static_cast<int>(rng.integer(static_cast<std::uint64_t>(i + 1)));
      std::swap(perm[i], perm[j]);
    }
    perm.resize(served_counts[cell]);
    book.assignment.push_back(std::move(perm));
  }
}

double uplink_pilot_power_dbm(double slow_gain_linear, double p_max_dbm,
                              double p0_dbm, double alpha) {
  if (slow_gain_linear <= 0.0)
    throw std::invalid_argument("uplink_pilot_power_dbm: gain must be > 0");
  double gain_db = lin_to_db(slow_gain_linear);
  return std::min(p_max_dbm, p0_dbm - alpha * gain_db);
}

CMat received_pilot_block(int bs, const std::vector<PilotUe>& pilot_ues,
                          const std::vector<int>& active_ids,
                          const std::vector<WiFiDevice>& devices,
                          const ChannelSet& channels, const PilotBook& book,
                          double sigma_eta_mw, Rng& rng) {
  const int n = channels.n_antennas;
  const int m_p = static_cast<int>(book.seq.cols());
  CMat y = CMat::Zero(n, m_p);

  // Simultaneous uplink pilots from every served UE in every cell.
  for (const PilotUe& pu : pilot_ues) {
    const double amp = std::sqrt(pu.power_mw);
    y.noalias() += (amp * channels.h_vec(bs, pu.ue)) *
                   book.seq.col(pu.pilot).transpose();
  }
  // Wi-Fi devices keep transmitting during the pilot phase.
  for (int id : active_ids) {
    const double amp = std::sqrt(db_to_lin(devices[id].tx_power_dbm));
    CVec s(m_p);
    for (int m = 0; m < m_p; ++m) s(m) = rng.cnormal();
    y.noalias() += (amp * channels.g[bs].col(id)) * s.transpose();
  }
  const double nstd = std::sqrt(sigma_eta_mw);
  for (int m = 0; m < m_p; ++m)
    for (int i = 0; i < n; ++i) y(i, m) += nstd * rng.cnormal();
  return y;
}

CsiEstimate estimate_ue_channels(const CMat& y_block, const PilotBook& book,
                                 const std::vector<PilotUe>& served,
                                 const ProjectorPair& proj,
                                 const std::vector<double>& slow_gain) {
  if (served.size() != slow_gain.size())
    throw std::invalid_argument("estimate_ue_channels: size mismatch");
  const int n = static_cast<int>(y_block.rows());
  CsiEstimate est;
  est.h_hat.resize(n, static_cast<int>(served.size()));
  est.h_norm.resize(n, static_cast<int>(served.size()));
  for (std::size_t k = 0; k < served.size(); ++k) {
    if (slow_gain[k] <= 0.0)
      throw std::invalid_argument(
          "estimate_ue_channels: slow-fading gain must be > 0");
    CVec corr = y_block * book.seq.col(served[k].pilot).conjugate();
    CVec projected = (proj.dims == 0) ? corr : CVec(proj.pi_perp * corr);
    est.h_hat.col(k) = projected;
    est.h_norm.col(k) = projected / slow_gain[k];
  }
  return est;
}

PrecoderState zf_precoder(const CMat& h_columns, double cond_bound) {
  const int k = static_cast<int>(h_columns.cols());
  if (k < 1) throw std::invalid_argument("zf_precoder: no columns");
  if (h_columns.rows() < h_columns.cols())
    throw std::invalid_argument("zf_precoder: more streams than antennas");

  PrecoderState st;
  CMat gram = h_columns.adjoint() * h_columns;
  Eigen::SelfAdjointEigenSolver<CMat> es(gram);
  if (es.info() != Eigen::Success) {
    st.failed = true;
    return st;
  }
  const double lmin = es.eigenvalues()(0);
  const double lmax = es.eigenvalues()(k - 1);
  if (!(lmin > 0.0) || lmax / lmin > cond_bound) {
    st.failed = true;
    return st;
  }
  CMat w_raw = h_columns * gram.inverse();
  st.zeta = w_raw.squaredNorm();
  st.w = w_raw / std::sqrt(st.zeta);
  return st;
}

double ue_sinr(int ue, int serving_bs, const std::vector<TxState>& tx,
               const ChannelSet& channels, const std::vector<int>& active_ids,
               const std::vector<WiFiDevice>& devices, double noise_mw,
               double pb_mw) {
  const TxState& own = tx[serving_bs];
  if (!own.transmitting)
    throw std::invalid_argument("ue_sinr: serving cell is not transmitting");
  auto it = std::find(own.served.begin(), own.served.end(), ue);
  if (it == own.served.end())
    throw std::invalid_argument("ue_sinr: UE not served by this cell");
  const int col = static_cast<int>(it - own.served.begin());

  double signal = 0.0;
  double interf = 0.0;
  for (std::size_t b = 0; b < tx.size(); ++b) {
    if (!tx[b].transmitting) continue;
    CVec hv = channels.h_vec(static_cast<int>(b), ue);
    Eigen::RowVectorXcd prods = hv.adjoint() * tx[b].w;
    for (int c = 0; c < prods.size(); ++c) {
      double p = pb_mw * std::norm(prods(c));
      if (static_cast<int>(b) == serving_bs && c == col)
        signal = p;
      else
        interf += p;
    }
  }
  double wifi = 0.0;
  for (int id : active_ids)
    wifi += db_to_lin(devices[id].tx_power_dbm) *
            std::norm(channels.q_coef(id, ue));
  return signal / (interf + wifi + noise_mw);
}

double wifi_interference_mw(int w, const std::vector<TxState>& tx,
                            const ChannelSet& channels, double pb_mw) {
  double acc = 0.0;
  for (std::size_t b = 0; b < tx.size(); ++b) {
    if (!tx[b].transmitting) continue;
    acc += pb_mw *
           (channels.g[b].col(w).adjoint() * tx[b].w).squaredNorm();
  }
  return acc;
}

double ue_rate_bps(double sinr, bool granted, double bw_hz) {
  if (sinr < 0.0) throw std::invalid_argument("ue_rate_bps: negative SINR");
  if (!granted) return 0.0;
  return bw_hz * std::log2(1.0 + sinr);
}

}  // namespace mmimou
