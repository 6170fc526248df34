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

#include "psort/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>

#include "psort/modal.hpp"

namespace psort {

void FlowParams::validate() const {
  if (!(dtau > 0.0)) throw std::invalid_argument("dtau must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be non-negative");
  if (snapshot_every < 1) throw std::invalid_argument("snapshot_every must be >= 1");
}

double matched_fidelity(ObjectiveKind kind, double E, double N2) {
  switch (kind) {
    case ObjectiveKind::plain_E: return 1.0 - E;
    case ObjectiveKind::total_E_minus_N2: return N2 - E;
    case ObjectiveKind::conditional_E_over_N2: return 1.0 - E / N2;
  }
  return 1.0 - E;
}

namespace {

void require_normalized(const Pulse& p, const char* what) {
  if (p.domain != Domain::momentum) throw std::invalid_argument(std::string(what) + " expects a momentum-domain seed");
  if (std::abs(p.norm2() - 1.0) > 1e-10) throw std::invalid_argument(std::string(what) + " requires a normalized seed");
}

TraceRecord make_record(int iter, const GradientResult& g, ObjectiveKind kind, double dtau) {
  TraceRecord r;
  r.iter = iter;
  r.objective = g.value;
  r.E = g.terms.E;
  r.N2 = g.terms.N2;
  r.fidelity = matched_fidelity(kind, g.terms.E, g.terms.N2);
  r.dtau = dtau;
  return r;
}

constexpr int kRestoreAfter = 10;
constexpr double kMinStep = 1e-12;

}  // namespace

OptimizationTrace gradient_flow(const EmitterChain& chain, const Pulse& seed, const FlowParams& params) {
  params.validate();
  chain.validate();
  require_normalized(seed, "gradient_flow");

  OptimizationTrace trace;
  Pulse phi = seed;
  GradientResult cur = gradient(chain, phi, params.kind);
  trace.iterations.push_back(make_record(0, cur, params.kind, 0.0));
  trace.snapshots.emplace_back(0, phi);

  double step = params.dtau;
  int successes = 0;
  int iter = 0;
  while (iter < params.max_iters) {
    Pulse next = phi;
    next.amp -= step * cur.grad.amp;
    next = normalize(next);
    GradientResult cand = gradient(chain, next, params.kind);
    if (params.backtracking && cand.value > cur.value) {
      ++trace.rejected_steps;
      step *= 0.5;
      successes = 0;
      if (step < kMinStep) {
        // No descent direction at machine precision; the seed is a stationary point.
        trace.converged = true;
        break;
      }
      continue;
    }
    ++iter;
    const double change = std::abs(cand.value - cur.value);
    phi = std::move(next);
    cur = std::move(cand);
    trace.iterations.push_back(make_record(iter, cur, params.kind, step));
    if (iter % params.snapshot_every == 0) trace.snapshots.emplace_back(iter, phi);
    if (++successes >= kRestoreAfter) {
      step = params.dtau;
      successes = 0;
    }
    if (change < params.tol) {
      trace.converged = true;
      break;
    }
  }
  if (trace.snapshots.back().first != trace.iterations.back().iter) {
    trace.snapshots.emplace_back(trace.iterations.back().iter, phi);
  }
  trace.final_pulse = std::move(phi);
  return trace;
}

Pulse filter_round(const EmitterChain& chain, const Pulse& phi) {
  require_normalized(phi, "filter_round");
  const TwoPhotonState out = apply_two_photon_chain(chain, product_state(phi));
  const Pulse psi = normalize(apply_single_photon(chain, phi));
  const ModalSplit split = decompose(psi, out);
  const TwoPhotonState reversed = negate_momenta(split.residual);
  const TwoPhotonState second = apply_two_photon_chain(chain, reversed);
  const TakagiDecomposition td = takagi(second);
  return normalize(negate_momenta(td.modes.front()));
}

OptimizationTrace iterative_filter(const EmitterChain& chain, const Pulse& seed, const FilterParams& params) {
  chain.validate();
  require_normalized(seed, "iterative_filter");
  if (params.max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
  if (!(params.tol > 0.0)) throw std::invalid_argument("tol must be positive");

  OptimizationTrace trace;
  Pulse phi = seed;
  Pulse best = seed;
  double best_E = 0.0;
  double prev_F = 0.0;
  for (int round = 0; round <= params.max_rounds; ++round) {
    const ObjectiveTerms terms = objective_terms(chain, phi, ObjectiveKind::plain_E);
    if (!std::isfinite(terms.E)) throw std::runtime_error("non-finite sorting error");
    TraceRecord r;
    r.iter = round;
    r.objective = terms.E;
    r.E = terms.E;
    r.N2 = terms.N2;
    r.fidelity = 1.0 - terms.E;
    trace.iterations.push_back(r);
    trace.snapshots.emplace_back(round, phi);
    if (round == 0 || terms.E < best_E) {
      best_E = terms.E;
      best = phi;
    }
    if (round > 0 && std::abs(r.fidelity - prev_F) < params.tol) {
      trace.converged = true;
      break;
    }
    prev_F = r.fidelity;
    if (round == params.max_rounds) break;
    phi = filter_round(chain, phi);
  }
  trace.final_pulse = std::move(best);
  return trace;
}

MultiSeedResult multi_seed(const EmitterChain& chain, const std::vector<Pulse>& seeds, const FlowParams& params) {
  if (seeds.empty()) throw std::invalid_argument("multi_seed needs at least one seed");
  MultiSeedResult res;
  std::vector<OptimizationTrace> traces(seeds.size());
  if (seeds.size() == 1) {
    traces[0] = gradient_flow(chain, seeds[0], params);
  } else {
    const long count = static_cast<long>(seeds.size());
    std::vector<std::exception_ptr> errors(seeds.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
      try {
        traces[i] = gradient_flow(chain, seeds[i], params);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  res.final_objectives.reserve(traces.size());
  for (const auto& t : traces) res.final_objectives.push_back(t.last().objective);
  const auto [lo, hi] = std::minmax_element(res.final_objectives.begin(), res.final_objectives.end());
  res.best_index = static_cast<std::size_t>(lo - res.final_objectives.begin());
  res.spread = *hi - *lo;
  res.best = std::move(traces[res.best_index]);
  return res;
}

std::vector<Pulse> standard_seeds(const Grid& g) {
  return {gaussian_pulse(g), lorentzian_pulse(g, 1.0), exp_decay_pulse(g)};
}

}  // namespace psort
