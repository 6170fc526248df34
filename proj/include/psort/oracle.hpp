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

#include <vector>

#include "psort/grid.hpp"
#include "psort/scattering.hpp"

namespace psort::oracle {

/// Time-dependent couplings of the input (phi) and output (psi) virtual cavities
/// on a uniform time grid.
struct CouplingSchedule {
  std::vector<double> times;
  std::vector<cplx> g_phi;
  std::vector<cplx> g_psi;
};

/// g_phi(t) = conj(phi(t)) / sqrt(1 - int_t0^t |phi|^2),
/// g_psi(t) = -conj(psi(t)) / sqrt(int_t0^t |psi|^2),
/// with cumulative norms by the trapezoid rule on the given uniform grid. Both
/// modes are renormalized on the span first. g_phi is clamped to 0 once the
/// remaining input norm drops below 1e-8; g_psi stays 0 until the accumulated
/// output norm exceeds 1e-10.
CouplingSchedule couplings(const std::vector<cplx>& phi_t, const std::vector<cplx>& psi_t,
                           const std::vector<double>& t);

struct CascadeSystem {
  EmitterChain chain;  ///< one or two emitters
  Pulse phi;           ///< input mode, momentum domain, normalized
  Pulse psi;           ///< target output mode, momentum domain, normalized
  int n_max = 2;       ///< photon cutoff per virtual cavity
  double dt = 1e-3;
  double t_start = 0.0;
  double t_end = 0.0;

  int dimension() const;
};

/// Span from the input mode's leading edge to the later of the input end plus
/// ring_down / min(Gamma_tot) and the output mode's trailing edge. psi defaults
/// to T phi / sqrt(N1) from the scattering module.
CascadeSystem make_cascade(const EmitterChain& chain, const Pulse& phi, double ring_down = 12.0, double dt = 1e-3);
CascadeSystem make_cascade(const EmitterChain& chain, const Pulse& phi, const Pulse& psi, double ring_down = 12.0,
                           double dt = 1e-3);

/// Couplings sampled on the half-step grid t_start + m dt/2.
CouplingSchedule schedule_for(const CascadeSystem& sys);

struct EvolveResult {
  CMatrix rho;                         ///< final density matrix
  std::vector<double> output_populations;  ///< diagonal of the reduced psi-cavity state
  double output_coherence = 0.0;           ///< largest off-diagonal of the reduced psi-cavity state
  double trace_drift = 0.0;                ///< max |tr rho - 1| over spot checks
  double hermiticity_error = 0.0;          ///< max |rho - rho^H| over spot checks
  double min_eigenvalue = 0.0;             ///< min over spot checks
  double emitted = 0.0;                    ///< int tr(L0^H L0 rho) dt
  double lost = 0.0;                       ///< int of the free-space loss flux
  double final_excitation = 0.0;           ///< tr(N rho) at the end, including the psi cavity
  double final_system_excitation = 0.0;    ///< tr(N rho) excluding the psi cavity
  int steps = 0;
};

/// Basis index of |n_phi, e_1, ..., e_Ne, n_psi>.
int basis_index(int n_phi, const std::vector<int>& excited, int n_psi, int n_emitters, int n_max);

/// Fixed-step RK4 from rho0 under the schedule (uniform half-step grid, so the
/// step is 2 * (t[1] - t[0])). Throws std::runtime_error when the trace drifts
/// by more than 1e-4.
EvolveResult evolve(const EmitterChain& chain, const CouplingSchedule& sched, const CMatrix& rho0, int n_max = 2);

/// |n_photons>_phi |g...g> |0>_psi through the cascade.
EvolveResult evolve(const CascadeSystem& sys, int n_photons);

struct DephasingRow {
  double gamma_p = 0.0;
  double F1 = 0.0;  ///< rho_11 of the psi cavity for one input photon
  double F2 = 0.0;  ///< rho_00 of the psi cavity for two input photons
};

/// The same dephasing rate is applied to every emitter.
std::vector<DephasingRow> dephasing_sweep(const CascadeSystem& sys, const std::vector<double>& gamma_p);

}  // namespace psort::oracle
