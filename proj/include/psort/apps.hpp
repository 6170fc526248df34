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

#include <string>
#include <vector>

#include "psort/grid.hpp"
#include "psort/optimize.hpp"
#include "psort/scattering.hpp"

namespace psort {

// ---------------------------------------------------------------------------
// Self-time-reversal of the two-photon scattering

struct TimeReversalFit {
  double t_d = 0.0;
  double overlap = 0.0;  ///< |<Psi_m'|Psi_m>| / |Psi_m|^2
  /// |<phi(-k1) phi(-k2) e^{i(k1+k2) t_d} | S0 S0 (phi phi)>| / norms
  double second_scatter_overlap = 0.0;
  /// |<f1, phi(-k) e^{i k t_d}>| for the most populated output mode f1
  double mode_overlap = 0.0;
};

struct TimeReversalOptions {
  double t_min = 0.0;
  double t_max = 10.0;
  double scan_step = 1e-3;
};

/// Overlap of Psi_m(k1,k2) = S0(phi phi) with Psi_m(-k1,-k2) e^{i(k1+k2) t_d}.
double time_reversal_overlap(const TwoPhotonState& psi_m, double t_d);

TimeReversalFit time_reversal_fit(const Emitter& e, const Pulse& p, TimeReversalOptions opts = {});

// ---------------------------------------------------------------------------
// Nonlinear-sign gate

struct NsGateResult {
  double F_NS = 0.0;
  double phi_NS = 0.0;  ///< radians in (-pi, pi]
  double c1_sq = 0.0;
  double c2_sq = 0.0;
  cplx direct;       ///< <phi phi | Psi_2>
  cplx closed_form;  ///< 2|c2|^2 + sqrt2 e^{i pi/4} |c1|^2 - 1
  double mismatch = 0.0;
  double N2 = 0.0;
  int window_factor = 1;
};

/// sqrt(F) e^{i phi} for given single/double-occupation populations.
cplx ns_closed_form(double c1_sq, double c2_sq);

/// Direct pipeline: Psi_0 = S(phi phi), apply the phase map {c2 psi psi: +1,
/// cross term: i, residual: -1}, time-reverse, scatter, time-reverse, overlap
/// with phi phi. Runs on a window widened by window_factor at fixed dk. For a
/// lossless chain, throws std::runtime_error if the pipeline and closed form
/// disagree by more than tolerance.
NsGateResult ns_gate(const EmitterChain& chain, const Pulse& p, int window_factor = 4, double tolerance = 1e-6);

// ---------------------------------------------------------------------------
// Bell-state analyzer

struct BellRow {
  std::string input;
  std::vector<std::vector<std::string>> clicks;  ///< alternatives, each a set of detectors
  double probability = 0.0;
};

std::vector<BellRow> bell_table(double F);
std::string format_clicks(const BellRow& row);

// ---------------------------------------------------------------------------
// Sweeps

struct LorentzianRow {
  double sigma = 0.0;
  double c1_sq = 0.0;
  double c2_sq = 0.0;
  double E() const { return c1_sq + c2_sq; }
};

struct LorentzianSweep {
  std::vector<LorentzianRow> rows;
  std::vector<std::size_t> c2_zeros;  ///< row indices of interior local minima of |c2|^2
  std::vector<std::size_t> c1_maxima;  ///< row indices of interior local maxima of |c1|^2
  std::size_t min_index = 0;           ///< row with the smallest |c1|^2 + |c2|^2
  double min_E = 0.0;

  /// Every |c2|^2 zero has a |c1|^2 maximum within max_steps rows.
  bool zeros_match_maxima(std::size_t max_steps = 1) const;
};

/// Per-sigma modal extraction for phi ∝ 1/(k^2 + sigma^2) scattered by one emitter.
LorentzianSweep sweep_lorentzian(const Emitter& e, const std::vector<double>& sigmas, const Grid& grid);

/// Geometric sequence of count points from lo to hi.
std::vector<double> geometric_range(double lo, double hi, int count);

struct SweepCell {
  int emitters = 0;
  double gamma_ratio = 1.0;
  double detuning = 0.0;
  double beta = 1.0;
  double F = 0.0;
  double a1_sq = 0.0;  ///< weight of the most populated output mode
  double spread = 0.0;
  int iterations = 0;
  bool converged = false;
  Pulse optimum;
};

struct SweepOptions {
  FlowParams flow;
  bool with_takagi = true;
};

/// Identical emitters, Ne from the list; each cell uses the standard seeds.
std::vector<SweepCell> sweep_emitters(const std::vector<int>& counts, const Emitter& e, const Grid& grid,
                                      const SweepOptions& opts = {});

/// Two-emitter chain with emitter 2 at rate gamma_ratio and detuning delta.
EmitterChain mismatched_pair(double gamma_ratio, double delta);

/// Cells in row-major (ratio, detuning) order. With warm_start each cell is seeded
/// from the previous cell's optimum; the first cell uses the standard seeds.
std::vector<SweepCell> sweep_mismatch(const std::vector<double>& ratios, const std::vector<double>& detunings,
                                      const Grid& grid, const SweepOptions& opts = {}, bool warm_start = true,
                                      const Pulse* first_seed = nullptr);

struct BetaRow {
  double beta = 1.0;
  double Ft_reuse = 0.0;  ///< lossless optimum used unchanged
  double Fc_reuse = 0.0;
  double Ft_opt = 0.0;  ///< optimized with the requested objective at this beta
  double Fc_opt = 0.0;
  int iterations = 0;
  bool converged = false;
  Pulse optimum;
};

/// Two identical emitters with directional efficiency beta. reference is the
/// lossless optimum; it is reused as-is and also seeds each optimization.
std::vector<BetaRow> sweep_beta(const std::vector<double>& betas, ObjectiveKind kind, const Pulse& reference,
                                const SweepOptions& opts = {});

}  // namespace psort
