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

#include "psort/apps.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <stdexcept>

#include "psort/modal.hpp"

namespace psort {

// ---------------------------------------------------------------------------
// Self-time-reversal

namespace {

// A[m] = sum_{i+j=m} conj(Psi(-k_i,-k_j)) Psi(k_i,k_j)
std::vector<cplx> reversal_shells(const TwoPhotonState& s) {
  const Grid& g = s.grid;
  const int n = g.n;
  std::vector<cplx> shells(2 * n - 1, cplx(0.0));
  for (int j = 0; j < n; ++j) {
    const int nj = g.negated(j);
    for (int i = 0; i < n; ++i) shells[i + j] += std::conj(s.amp(g.negated(i), nj)) * s.amp(i, j);
  }
  return shells;
}

double shell_overlap(const std::vector<cplx>& shells, const Grid& g, double norm, double t_d) {
  // E_m = k_i + k_j = -2 k_max + m dk
  const cplx step = std::polar(1.0, -g.dk * t_d);
  cplx rot = std::polar(1.0, 2.0 * g.k_max * t_d);
  cplx acc = 0.0;
  for (std::size_t m = 0; m < shells.size(); ++m) {
    if (m % 64 == 0) rot = std::polar(1.0, -(-2.0 * g.k_max + static_cast<double>(m) * g.dk) * t_d);
    acc += rot * shells[m];
    rot *= step;
  }
  return std::abs(acc) / norm;
}

}  // namespace

double time_reversal_overlap(const TwoPhotonState& psi_m, double t_d) {
  const double norm = psi_m.amp.squaredNorm();
  if (!(norm > 0.0)) throw std::invalid_argument("zero two-photon state");
  return shell_overlap(reversal_shells(psi_m), psi_m.grid, norm, t_d);
}

TimeReversalFit time_reversal_fit(const Emitter& e, const Pulse& p, TimeReversalOptions opts) {
  if (!(opts.t_max > opts.t_min) || !(opts.scan_step > 0.0)) throw std::invalid_argument("bad t_d search range");
  const TwoPhotonState psi_m = apply_two_photon_emitter(e, product_state(p));
  const std::vector<cplx> shells = reversal_shells(psi_m);
  const double norm = psi_m.amp.squaredNorm();
  const Grid& g = p.grid;
  auto overlap = [&](double t) { return shell_overlap(shells, g, norm, t); };

  const long count = static_cast<long>(std::floor((opts.t_max - opts.t_min) / opts.scan_step)) + 1;
  std::vector<double> scan(count);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) scan[i] = overlap(opts.t_min + i * opts.scan_step);
  const long best = std::max_element(scan.begin(), scan.end()) - scan.begin();

  // Golden-section refinement on the bracketing scan cell.
  double a = std::max(opts.t_min, opts.t_min + (best - 1) * opts.scan_step);
  double b = std::min(opts.t_max, opts.t_min + (best + 1) * opts.scan_step);
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - r * (b - a);
  double x2 = a + r * (b - a);
  double f1 = overlap(x1);
  double f2 = overlap(x2);
  while (b - a > 1e-10) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = overlap(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = overlap(x2);
    }
  }
  TimeReversalFit fit;
  fit.t_d = 0.5 * (a + b);
  fit.overlap = overlap(fit.t_d);
  if (scan[best] > fit.overlap) {
    fit.t_d = opts.t_min + best * opts.scan_step;
    fit.overlap = scan[best];
  }

  const TwoPhotonState second = apply_two_photon_emitter(e, psi_m);
  const Pulse reversed = phase_ramp(negate_momenta(p), fit.t_d);
  const TwoPhotonState target = product_state(reversed);
  fit.second_scatter_overlap = std::abs(inner(target, second)) / std::sqrt(target.norm2() * second.norm2());
  const TakagiDecomposition td = takagi(second);
  fit.mode_overlap = std::abs(inner(td.modes.front(), reversed));
  return fit;
}

// ---------------------------------------------------------------------------
// Nonlinear-sign gate

cplx ns_closed_form(double c1_sq, double c2_sq) {
  return 2.0 * c2_sq + std::sqrt(2.0) * std::polar(1.0, kPi / 4.0) * c1_sq - 1.0;
}

NsGateResult ns_gate(const EmitterChain& chain, const Pulse& p, int window_factor, double tolerance) {
  chain.validate();
  const Pulse phi = extend_window(p, window_factor);
  const TwoPhotonState input = product_state(phi);
  const TwoPhotonState psi0 = apply_two_photon_chain(chain, input);
  const Pulse psi = normalize(apply_single_photon(chain, phi));
  const ModalSplit split = decompose(psi, psi0);
  const TwoPhotonState psi1 = recombine(psi, split, kI, -1.0);
  const TwoPhotonState psi2 = negate_momenta(apply_two_photon_chain(chain, negate_momenta(psi1)));

  NsGateResult res;
  res.window_factor = window_factor;
  res.N2 = psi0.norm2();
  res.c1_sq = split.c1 * split.c1;
  res.c2_sq = std::norm(split.c2);
  res.direct = inner(input, psi2);
  res.closed_form = ns_closed_form(res.c1_sq, res.c2_sq);
  res.mismatch = std::abs(res.direct - res.closed_form);
  res.F_NS = std::norm(res.direct);
  res.phi_NS = std::arg(res.direct);
  if (chain.lossless() && res.mismatch > tolerance) {
    throw std::runtime_error("NS gate pipeline disagrees with the closed form by " + std::to_string(res.mismatch));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Bell-state analyzer

std::vector<BellRow> bell_table(double F) {
  if (!(F >= 0.0 && F <= 1.0)) throw std::invalid_argument("fidelity must lie in [0, 1]");
  return {
      {"Phi+", {{"D1", "D2"}, {"D3", "D4"}}, 1.0},
      {"Phi-", {{"D1", "D4"}, {"D2", "D3"}}, 1.0},
      {"Psi+", {{"D5", "D6"}, {"D7", "D8"}}, F},
      {"Psi-", {{"D5"}, {"D6"}, {"D7"}, {"D8"}}, F},
  };
}

std::string format_clicks(const BellRow& row) {
  std::string out;
  for (std::size_t a = 0; a < row.clicks.size(); ++a) {
    if (a > 0) out += " or ";
    out += "{";
    for (std::size_t d = 0; d < row.clicks[a].size(); ++d) {
      if (d > 0) out += ",";
      out += row.clicks[a][d];
    }
    out += "}";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<double> geometric_range(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw std::invalid_argument("bad geometric range");
  std::vector<double> out(count);
  const double ratio = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = lo * std::exp(ratio * i);
  out.back() = hi;
  return out;
}

bool LorentzianSweep::zeros_match_maxima(std::size_t max_steps) const {
  if (c2_zeros.empty()) return false;
  for (std::size_t z : c2_zeros) {
    const bool hit = std::any_of(c1_maxima.begin(), c1_maxima.end(), [&](std::size_t m) {
      return (m > z ? m - z : z - m) <= max_steps;
    });
    if (!hit) return false;
  }
  return true;
}

LorentzianSweep sweep_lorentzian(const Emitter& e, const std::vector<double>& sigmas, const Grid& grid) {
  e.validate();
  for (double s : sigmas) {
    if (!(s > 0.0)) throw std::invalid_argument("lorentzian widths must be positive");
  }
  const EmitterChain chain{{e}};
  LorentzianSweep out;
  out.rows.resize(sigmas.size());
  const long count = static_cast<long>(sigmas.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    const SortingReport r = sorting_report(chain, lorentzian_pulse(grid, sigmas[i]));
    out.rows[i] = LorentzianRow{sigmas[i], r.c1 * r.c1, std::norm(r.c2)};
  }
  for (std::size_t i = 1; i + 1 < out.rows.size(); ++i) {
    const auto& a = out.rows[i - 1];
    const auto& b = out.rows[i];
    const auto& c = out.rows[i + 1];
    if (b.c2_sq < a.c2_sq && b.c2_sq <= c.c2_sq) out.c2_zeros.push_back(i);
    if (b.c1_sq > a.c1_sq && b.c1_sq >= c.c1_sq) out.c1_maxima.push_back(i);
  }
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    if (i == 0 || out.rows[i].E() < out.min_E) {
      out.min_E = out.rows[i].E();
      out.min_index = i;
    }
  }
  return out;
}

namespace {

SweepCell run_cell(const EmitterChain& chain, const std::vector<Pulse>& seeds, const SweepOptions& opts) {
  const MultiSeedResult ms = multi_seed(chain, seeds, opts.flow);
  SweepCell cell;
  cell.emitters = static_cast<int>(chain.size());
  cell.iterations = ms.best.last().iter;
  cell.converged = ms.best.converged;
  cell.spread = ms.spread;
  cell.optimum = ms.best.final_pulse;
  const SortingReport r = sorting_report(chain, cell.optimum, ReportOptions{opts.with_takagi});
  cell.F = r.F;
  if (r.takagi) cell.a1_sq = r.takagi->weight(0);
  return cell;
}

}  // namespace

std::vector<SweepCell> sweep_emitters(const std::vector<int>& counts, const Emitter& e, const Grid& grid,
                                      const SweepOptions& opts) {
  std::vector<SweepCell> cells;
  cells.reserve(counts.size());
  for (int ne : counts) {
    if (ne < 1) throw std::invalid_argument("emitter count must be >= 1");
    SweepCell cell = run_cell(EmitterChain::identical(ne, e), standard_seeds(grid), opts);
    cell.beta = e.beta;
    cell.detuning = e.delta;
    cells.push_back(std::move(cell));
  }
  return cells;
}

EmitterChain mismatched_pair(double gamma_ratio, double delta) {
  EmitterChain chain;
  chain.emitters.push_back(Emitter{});
  Emitter second;
  second.gamma = gamma_ratio;
  second.delta = delta;
  chain.emitters.push_back(second);
  chain.validate();
  return chain;
}

std::vector<SweepCell> sweep_mismatch(const std::vector<double>& ratios, const std::vector<double>& detunings,
                                      const Grid& grid, const SweepOptions& opts, bool warm_start,
                                      const Pulse* first_seed) {
  std::vector<SweepCell> cells;
  cells.reserve(ratios.size() * detunings.size());
  const Pulse* previous = first_seed;
  for (double ratio : ratios) {
    for (double delta : detunings) {
      const EmitterChain chain = mismatched_pair(ratio, delta);
      std::vector<Pulse> seeds;
      if (warm_start && previous != nullptr) {
        seeds.push_back(*previous);
      } else {
        seeds = standard_seeds(grid);
      }
      SweepCell cell = run_cell(chain, seeds, opts);
      cell.gamma_ratio = ratio;
      cell.detuning = delta;
      cells.push_back(std::move(cell));
      previous = &cells.back().optimum;
    }
  }
  return cells;
}

std::vector<BetaRow> sweep_beta(const std::vector<double>& betas, ObjectiveKind kind, const Pulse& reference,
                                const SweepOptions& opts) {
  std::vector<BetaRow> rows;
  rows.reserve(betas.size());
  FlowParams flow = opts.flow;
  flow.kind = kind;
  for (double beta : betas) {
    Emitter e;
    e.beta = beta;
    const EmitterChain chain = EmitterChain::identical(2, e);
    BetaRow row;
    row.beta = beta;
    const SortingReport reuse = sorting_report(chain, reference);
    row.Ft_reuse = reuse.Ft;
    row.Fc_reuse = reuse.Fc;
    const OptimizationTrace trace = gradient_flow(chain, reference, flow);
    const SortingReport opt = sorting_report(chain, trace.final_pulse);
    row.Ft_opt = opt.Ft;
    row.Fc_opt = opt.Fc;
    row.iterations = trace.last().iter;
    row.converged = trace.converged;
    row.optimum = trace.final_pulse;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace psort
