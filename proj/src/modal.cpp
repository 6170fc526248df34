// Copyright 2026 The psort Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "psort/modal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/SVD>

namespace psort {

TwoPhotonState TakagiDecomposition::reconstruct() const {
  if (modes.empty()) throw std::invalid_argument("empty decomposition");
  const Grid& g = modes.front().grid;
  CMatrix m = CMatrix::Zero(g.n, g.n);
  for (std::size_t n = 0; n < modes.size(); ++n) {
    m.noalias() += eigenvalues[n] * modes[n].amp * modes[n].amp.transpose();
  }
  return TwoPhotonState{g, std::move(m)};
}

TakagiDecomposition takagi(const TwoPhotonState& s, double degeneracy_gap) {
  if (!s.is_symmetric(1e-12 * std::max(1.0, s.amp.cwiseAbs().maxCoeff()))) {
    throw std::invalid_argument("takagi requires a symmetric amplitude");
  }
  const Grid& g = s.grid;
  const int n = g.n;
  const CMatrix a = s.amp * g.dk;
  Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const CMatrix& u = svd.matrixU();
  const CMatrix& v = svd.matrixV();

  std::vector<cplx> values(n);
  CMatrix modes(n, n);

  // A = U S V^H with A = A^T gives conj(V_B) = U_B Q on each block of equal
  // singular values, Q unitary and symmetric. Q = R D R^T with R real orthogonal
  // turns U_B R into Takagi vectors with values sigma * D.
  int b0 = 0;
  while (b0 < n) {
    int b1 = b0 + 1;
    while (b1 < n && sigma[b1 - 1] - sigma[b1] < degeneracy_gap) ++b1;
    const int m = b1 - b0;
    const CMatrix ub = u.middleCols(b0, m);
    const CMatrix q = ub.adjoint() * v.middleCols(b0, m).conjugate();
    if (m == 1) {
      const cplx d = q(0, 0);
      const double mag = std::abs(d);
      values[b0] = sigma[b0] * (mag > 0.0 ? d / mag : cplx(1.0));
      modes.col(b0) = ub.col(0);
    } else {
      const Eigen::MatrixXd sym = 0.5 * (q.real() + q.real().transpose()) +
                                  0.5772156649 * 0.5 * (q.imag() + q.imag().transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
      const Eigen::MatrixXd& r = es.eigenvectors();
      const CMatrix rc = r.cast<cplx>();
      const CMatrix d = rc.transpose() * q * rc;
      modes.middleCols(b0, m) = ub * rc;
      for (int k = 0; k < m; ++k) {
        const cplx dk = d(k, k);
        const double mag = std::abs(dk);
        values[b0 + k] = sigma[b0 + k] * (mag > 0.0 ? dk / mag : cplx(1.0));
      }
    }
    b0 = b1;
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return std::abs(values[x]) > std::abs(values[y]); });

  TakagiDecomposition out;
  out.eigenvalues.reserve(n);
  out.modes.reserve(n);
  const double inv_sqrt_dk = 1.0 / std::sqrt(g.dk);
  for (int idx : order) {
    out.eigenvalues.push_back(values[idx]);
    out.modes.push_back(Pulse{g, modes.col(idx) * inv_sqrt_dk, Domain::momentum});
  }
  return out;
}

cplx extract_c2(const Pulse& psi, const TwoPhotonState& s) {
  require_same_grid(psi.grid, s.grid);
  const double dk = s.grid.dk;
  return psi.amp.dot(s.amp * psi.amp.conjugate()) * (dk * dk);
}

namespace {

// g(k) = int dk1 psi*(k1) Psi(k1, k)
CVector contract_first(const Pulse& psi, const TwoPhotonState& s) {
  return (s.amp.transpose() * psi.amp.conjugate()) * s.grid.dk;
}

}  // namespace

SingleOccupation extract_c1_theta(const Pulse& psi, const TwoPhotonState& s) {
  require_same_grid(psi.grid, s.grid);
  const cplx c2 = extract_c2(psi, s);
  const CVector g = contract_first(psi, s);
  Pulse v{psi.grid, std::sqrt(2.0) * (g - c2 * psi.amp), Domain::momentum};
  SingleOccupation out;
  out.c1 = v.norm();
  if (out.c1 > 0.0) {
    v.amp /= out.c1;
    out.theta = std::move(v);
  } else {
    out.theta = zero_pulse(psi.grid);
  }
  return out;
}

ModalSplit decompose(const Pulse& psi, const TwoPhotonState& s) {
  ModalSplit split;
  split.c2 = extract_c2(psi, s);
  auto occ = extract_c1_theta(psi, s);
  split.c1 = occ.c1;
  split.theta = std::move(occ.theta);
  split.residual = recombine(psi, split, 1.0, 0.0);
  split.residual.amp = s.amp - split.residual.amp;
  return split;
}

TwoPhotonState recombine(const Pulse& psi, const ModalSplit& split, cplx w1, cplx wr) {
  const Grid& g = psi.grid;
  CMatrix m = split.c2 * (psi.amp * psi.amp.transpose());
  if (split.c1 > 0.0 && w1 != cplx(0.0)) {
    const CMatrix cross = psi.amp * split.theta.amp.transpose();
    m += w1 * (split.c1 / std::sqrt(2.0)) * (cross + cross.transpose());
  }
  if (wr != cplx(0.0) && split.residual.amp.size() > 0) m += wr * split.residual.amp;
  return TwoPhotonState{g, std::move(m)};
}

SortingReport sorting_report(const EmitterChain& chain, const Pulse& p, ReportOptions opts) {
  if (std::abs(p.norm2() - 1.0) > 1e-10) throw std::invalid_argument("sorting_report requires a normalized pulse");
  SortingReport r;
  r.psi_out = apply_single_photon(chain, p);
  r.output = apply_two_photon_chain(chain, product_state(p));
  r.N1 = r.psi_out.norm2();
  r.N2 = r.output.norm2();
  const Pulse psi_hat = normalize(r.psi_out);
  r.c2 = extract_c2(psi_hat, r.output);
  auto occ = extract_c1_theta(psi_hat, r.output);
  r.c1 = occ.c1;
  r.theta = std::move(occ.theta);
  r.E = r.c1 * r.c1 + std::norm(r.c2);
  r.F = 1.0 - r.E;
  r.Ft = r.N2 - r.E;
  r.Fc = 1.0 - r.E / r.N2;
  if (opts.with_takagi) r.takagi = takagi(r.output);
  return r;
}

}  // namespace psort
