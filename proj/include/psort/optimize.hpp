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

#include <utility>
#include <vector>

#include "psort/grid.hpp"
#include "psort/objective.hpp"
#include "psort/scattering.hpp"

namespace psort {

struct FlowParams {
  double dtau = 0.05;
  int max_iters = 20000;
  double tol = 1e-10;  ///< stop when |objective_n - objective_{n-1}| < tol
  ObjectiveKind kind = ObjectiveKind::plain_E;
  bool backtracking = true;  ///< halve dtau on an increase, restore after 10 accepted steps
  int snapshot_every = 100;

  void validate() const;
};

struct TraceRecord {
  int iter = 0;
  double objective = 0.0;
  double fidelity = 0.0;  ///< F, Ft or Fc to match the objective kind
  double E = 0.0;
  double N2 = 0.0;
  double dtau = 0.0;  ///< step that produced this record (0 for the seed)
};

struct OptimizationTrace {
  std::vector<TraceRecord> iterations;
  std::vector<std::pair<int, Pulse>> snapshots;
  Pulse final_pulse;
  bool converged = false;
  int rejected_steps = 0;

  const TraceRecord& last() const { return iterations.back(); }
};

/// Fidelity matched to an objective kind: 1-E, N2-E or 1-E/N2.
double matched_fidelity(ObjectiveKind kind, double E, double N2);

/// Normalized gradient flow phi <- normalize(phi - dtau * dObjective/dphi*).
OptimizationTrace gradient_flow(const EmitterChain& chain, const Pulse& seed, const FlowParams& params = {});

struct FilterParams {
  int max_rounds = 50;
  double tol = 1e-10;  ///< stop when |F_n - F_{n-1}| < tol
};

/// Round: scatter phi phi, remove the psi-mode components, time-reverse, scatter
/// again and take the time-reversed most populated Takagi mode as the next pulse.
/// Returns the best round seen; converged is false when max_rounds ran out.
OptimizationTrace iterative_filter(const EmitterChain& chain, const Pulse& seed, const FilterParams& params = {});

/// One filter round on a normalized pulse.
Pulse filter_round(const EmitterChain& chain, const Pulse& phi);

struct MultiSeedResult {
  OptimizationTrace best;
  std::size_t best_index = 0;
  std::vector<double> final_objectives;
  double spread = 0.0;  ///< max - min of final objectives
};

MultiSeedResult multi_seed(const EmitterChain& chain, const std::vector<Pulse>& seeds, const FlowParams& params = {});

/// Gaussian, Lorentzian (sigma = 1) and causal exponential-decay seeds, normalized.
std::vector<Pulse> standard_seeds(const Grid& g);

}  // namespace psort
