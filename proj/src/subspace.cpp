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

#include "mmimou/subspace.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace mmimou {

IdleSnapshot sample_idle_signal(int bs, const std::vector<int>& active_ids,
                                const std::vector<WiFiDevice>& devices,
                                const ChannelSet& channels,
                                double sigma_eta_mw, Rng& rng) {
  const int n = channels.n_antennas;
  IdleSnapshot snap;
  snap.z = CVec::Zero(n);
  for (int id : active_ids) {
    const double amp = std::sqrt(db_to_lin(devices[id].tx_power_dbm));
    const std::complex<double> s = rng.cnormal();
    snap.z += (amp * s) * channels.g[bs].col(id);
  }
  const double nstd = std::sqrt(sigma_eta_mw);
  for (int i = 0; i < n; ++i) snap.z(i) += nstd * rng.cnormal();
  return snap;
}

namespace {

// Symmetrize, eigendecompose, and order eigenpairs by descending eigenvalue;
// ties keep the ascending index order of the solver output so results are
// reproducible across runs.
CovarianceEstimate decompose(CMat z, int sample_count) {
  CovarianceEstimate out;
  out.z_hat = 0.5 * (z + z.adjoint());
  out.sample_count = sample_count;

  Eigen::SelfAdjointEigenSolver<CMat> es(out.z_hat);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("covariance eigendecomposition failed");

  const int n = static_cast<int>(z.rows());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending from the solver
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (ev(a) != ev(b)) return ev(a) > ev(b);
    return a < b;
  });

  out.eigvals.resize(n);
  out.eigvecs.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.eigvals(i) = ev(order[i]);
    out.eigvecs.col(i) = es.eigenvectors().col(order[i]);
  }
  return out;
}

}  // namespace

CovarianceEstimate estimate_covariance(
    const std::vector<IdleSnapshot>& snaps) {
  if (snaps.empty())
    throw std::invalid_argument("estimate_covariance: no snapshots");
  const int n = static_cast<int>(snaps[0].z.size());
  CMat acc = CMat::Zero(n, n);
  for (const IdleSnapshot& s : snaps) {
    if (s.z.size() != n)
      throw std::invalid_argument("estimate_covariance: size mismatch");
    acc.selfadjointView<Eigen::Lower>().rankUpdate(s.z, 1.0);
  }
  CMat z = CMat(acc.selfadjointView<Eigen::Lower>()) /
           static_cast<double>(snaps.size());
  return decompose(std::move(z), static_cast<int>(snaps.size()));
}

CovarianceEstimate exact_covariance(int bs,
                                    const std::vector<WiFiDevice>& devices,
                                    const ChannelSet& channels,
                                    const std::vector<double>& activity_prob,
                                    double sigma_eta_mw) {
  if (activity_prob.size() != devices.size())
    throw std::invalid_argument("exact_covariance: probability size mismatch");
  const int n = channels.n_antennas;
  CMat z = sigma_eta_mw * CMat::Identity(n, n);
  if (!devices.empty()) {
    // Z = G diag(p_l P_l) G^H + noise, via a scaled rank update.
    CMat scaled = channels.g[bs];
    for (std::size_t l = 0; l < devices.size(); ++l) {
      double wgt = activity_prob[l] * db_to_lin(devices[l].tx_power_dbm);
      if (wgt < 0.0)
        throw std::invalid_argument("exact_covariance: negative probability");
      scaled.col(l) *= std::sqrt(wgt);
    }
    z.selfadjointView<Eigen::Lower>().rankUpdate(scaled, 1.0);
    z = CMat(z.selfadjointView<Eigen::Lower>());
  }
  return decompose(std::move(z), 0);
}

CovarianceEstimate decompose_covariance(const CMat& z, int sample_count) {
  if (z.rows() != z.cols())
    throw std::invalid_argument("decompose_covariance: matrix not square");
  return decompose(z, sample_count);
}

ProjectorPair ProjectorPair::identity_complement(int n) {
  ProjectorPair p;
  p.sigma = CMat::Zero(n, 0);
  p.pi = CMat::Zero(n, n);
  p.pi_perp = CMat::Identity(n, n);
  p.dims = 0;
  return p;
}

ProjectorPair dominant_subspace(const CovarianceEstimate& cov, int d) {
  const int n = static_cast<int>(cov.eigvals.size());
  if (d < 0 || d > n)
    throw std::invalid_argument("dominant_subspace: d out of range");
  if (cov.sample_count > 0 && d > cov.sample_count)
    throw std::invalid_argument(
        "dominant_subspace: d exceeds the estimation rank bound");
  if (d == 0) return ProjectorPair::identity_complement(n);
  ProjectorPair p;
  p.dims = d;
  p.sigma = cov.eigvecs.leftCols(d);
  p.pi = p.sigma * p.sigma.adjoint();
  p.pi_perp = CMat::Identity(n, n) - p.pi;
  return p;
}

}  // namespace mmimou
