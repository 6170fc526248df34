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

#pragma once

#include <optional>
#include <vector>

#include "psort/grid.hpp"
#include "psort/scattering.hpp"

namespace psort {

/// Psi(k1,k2) = sum_n a_n f_n(k1) f_n(k2) with orthonormal f_n and complex a_n,
/// sorted by |a_n| descending.
struct TakagiDecomposition {
  std::vector<cplx> eigenvalues;
  std::vector<Pulse> modes;

  double weight(std::size_t n) const { return std::norm(eigenvalues.at(n)); }
  TwoPhotonState reconstruct() const;
};

TakagiDecomposition takagi(const TwoPhotonState& s, double degeneracy_gap = 1e-10);

/// Overlap of Psi with psi(k1)psi(k2).
cplx extract_c2(const Pulse& psi, const TwoPhotonState& s);

struct SingleOccupation {
  double c1 = 0.0;  ///< real, non-negative
  Pulse theta;      ///< normalized and orthogonal to psi; zero when c1 == 0
};

/// c1 theta(k) = sqrt(2) int dk1 psi*(k1) Psi(k1,k) - sqrt(2) c2 psi(k). The phase
/// of c1 is absorbed into theta.
SingleOccupation extract_c1_theta(const Pulse& psi, const TwoPhotonState& s);

/// Psi = c2 psi psi + (c1/sqrt 2)(psi theta + theta psi) + residual.
struct ModalSplit {
  cplx c2;
  double c1 = 0.0;
  Pulse theta;
  TwoPhotonState residual;
};

ModalSplit decompose(const Pulse& psi, const TwoPhotonState& s);

/// Reassemble c2 psi psi + w1 (c1/sqrt2)(psi theta + theta psi) + wr residual.
TwoPhotonState recombine(const Pulse& psi, const ModalSplit& split, cplx w1, cplx wr);

struct SortingReport {
  double N1 = 0.0;
  double N2 = 0.0;
  double c1 = 0.0;
  cplx c2;
  Pulse theta;
  double E = 0.0;
  double F = 0.0;   ///< 1 - E
  double Ft = 0.0;  ///< N2 - E
  double Fc = 0.0;  ///< 1 - E/N2
  std::optional<TakagiDecomposition> takagi;
  Pulse psi_out;          ///< T*phi, not renormalized
  TwoPhotonState output;  ///< S(phi phi)
};

struct ReportOptions {
  bool with_takagi = false;
};

SortingReport sorting_report(const EmitterChain& chain, const Pulse& p, ReportOptions opts = {});

}  // namespace psort
