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

#include "psort/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace psort::oracle {

namespace {

constexpr double kPhiCutoff = 1e-8;
constexpr double kPsiStart = 1e-10;
constexpr double kEdgeMass = 1e-10;
constexpr double kMaxTraceDrift = 1e-4;
constexpr int kCheckEvery = 100;

void require_chain(const EmitterChain& chain) {
  chain.validate();
  if (chain.size() < 1 || chain.size() > 2) throw std::invalid_argument("the cascade oracle supports 1 or 2 emitters");
}

// Local dimensions: phi cavity, emitters, psi cavity.
std::vector<int> local_dims(int n_emitters, int n_max) {
  std::vector<int> d{n_max + 1};
  for (int i = 0; i < n_emitters; ++i) d.push_back(2);
  d.push_back(n_max + 1);
  return d;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix embed(const CMatrix& op, std::size_t slot, const std::vector<int>& dims) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (std::size_t s = 0; s < dims.size(); ++s) {
    out = kron(out, s == slot ? op : CMatrix::Identity(dims[s], dims[s]));
  }
  return out;
}

CMatrix lowering(int dim) {
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

// Linear combination sum_a coeff_a M_a stored on the union sparsity pattern.
class SparseCombo {
 public:
  explicit SparseCombo(const std::vector<CMatrix>& terms) {
    const Eigen::Index dim = terms.front().rows();
    for (Eigen::Index c = 0; c < dim; ++c) {
      for (Eigen::Index r = 0; r < dim; ++r) {
        const bool used = std::any_of(terms.begin(), terms.end(), [&](const CMatrix& m) { return m(r, c) != cplx(0.0); });
        if (used) {
          rows_.push_back(static_cast<int>(r));
          cols_.push_back(static_cast<int>(c));
        }
      }
    }
    vals_.resize(terms.size());
    for (std::size_t a = 0; a < terms.size(); ++a) {
      vals_[a].resize(rows_.size());
      for (std::size_t k = 0; k < rows_.size(); ++k) vals_[a][k] = terms[a](rows_[k], cols_[k]);
    }
    cur_.assign(rows_.size(), cplx(0.0));
  }

  void set(const std::vector<cplx>& coeffs) {
    std::fill(cur_.begin(), cur_.end(), cplx(0.0));
    for (std::size_t a = 0; a < vals_.size(); ++a) {
      if (coeffs[a] == cplx(0.0)) continue;
      for (std::size_t k = 0; k < cur_.size(); ++k) cur_[k] += coeffs[a] * vals_[a][k];
    }
  }

  // out = A x
  void apply(const CMatrix& x, CMatrix& out) const {
    out.setZero(x.rows(), x.cols());
    for (std::size_t k = 0; k < cur_.size(); ++k) {
      if (cur_[k] == cplx(0.0)) continue;
      out.row(rows_[k]) += cur_[k] * x.row(cols_[k]);
    }
  }

 private:
  std::vector<int> rows_, cols_;
  std::vector<std::vector<cplx>> vals_;
  std::vector<cplx> cur_;
};

struct Model {
  int dim = 0;
  int n_max = 2;
  int n_emitters = 0;
  // H_eff(t) terms, coefficients from heff_coeffs.
  std::unique_ptr<SparseCombo> heff;
  // L0(t) = A0 + conj(g_phi) a_phi + conj(g_psi) a_psi
  std::unique_ptr<SparseCombo> l0;
  CMatrix l0_ops[3];
  std::vector<std::unique_ptr<SparseCombo>> static_jumps;
  CMatrix loss_number;  // sum_i (Gamma_tot,i - Gamma_i) sigma_i^H sigma_i
  CMatrix number;       // total excitation including the psi cavity
  CMatrix psi_number;
};

// Coefficients matching the term order assembled in build_model.
std::vector<cplx> heff_coeffs(cplx gphi, cplx gpsi) {
  const cplx h = 0.5 * kI;
  const cplx c[3] = {1.0, std::conj(gphi), std::conj(gpsi)};
  std::vector<cplx> out{1.0,
                        h * gphi,
                        -h * std::conj(gphi),
                        h * std::conj(gpsi),
                        -h * gpsi,
                        h * gphi * std::conj(gpsi),
                        -h * std::conj(gphi) * gpsi};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a == 0 && b == 0) continue;
      out.push_back(-h * std::conj(c[a]) * c[b]);
    }
  }
  return out;
}

Model build_model(const EmitterChain& chain, int n_max) {
  Model m;
  m.n_max = n_max;
  m.n_emitters = static_cast<int>(chain.size());
  const std::vector<int> dims = local_dims(m.n_emitters, n_max);
  const std::size_t psi_slot = dims.size() - 1;
  const CMatrix a_phi = embed(lowering(n_max + 1), 0, dims);
  const CMatrix a_psi = embed(lowering(n_max + 1), psi_slot, dims);
  std::vector<CMatrix> sig;
  for (int i = 0; i < m.n_emitters; ++i) sig.push_back(embed(lowering(2), 1 + i, dims));
  m.dim = static_cast<int>(a_phi.rows());
  const CMatrix zero = CMatrix::Zero(m.dim, m.dim);

  CMatrix a0 = zero, p1 = zero, p2 = zero, p4 = zero, detuning = zero, k_static = zero;
  m.loss_number = zero;
  for (int i = 0; i < m.n_emitters; ++i) {
    const Emitter& e = chain.emitters[i];
    const double rg = std::sqrt(e.gamma);
    a0 += rg * sig[i];
    p1 += rg * a_phi.adjoint() * sig[i];
    p2 += rg * sig[i].adjoint() * a_psi;
    for (int j = i + 1; j < m.n_emitters; ++j) p4 += std::sqrt(e.gamma * chain.emitters[j].gamma) * sig[i].adjoint() * sig[j];
    const CMatrix ee = sig[i].adjoint() * sig[i];
    detuning += e.delta * ee;
    const double loss = e.gamma_tot() - e.gamma;
    if (loss > 0.0) {
      m.static_jumps.push_back(std::make_unique<SparseCombo>(std::vector<CMatrix>{std::sqrt(loss) * sig[i]}));
      k_static += loss * ee;
      m.loss_number += loss * ee;
    }
    if (e.gamma_p > 0.0) {
      m.static_jumps.push_back(std::make_unique<SparseCombo>(std::vector<CMatrix>{std::sqrt(e.gamma_p) * ee}));
      k_static += e.gamma_p * ee;  // ee^H ee = ee
    }
  }
  for (auto& j : m.static_jumps) j->set({1.0});
  const CMatrix p3 = a_phi.adjoint() * a_psi;
  const cplx h = 0.5 * kI;
  const CMatrix c0 = h * (p4 - p4.adjoint()) + detuning - h * (k_static + a0.adjoint() * a0);

  const CMatrix b[3] = {a0, a_phi, a_psi};
  std::vector<CMatrix> terms{c0, p1, p1.adjoint(), p2, p2.adjoint(), p3, p3.adjoint()};
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) {
      if (x == 0 && y == 0) continue;
      terms.push_back(b[x].adjoint() * b[y]);
    }
  }
  m.heff = std::make_unique<SparseCombo>(terms);
  m.l0 = std::make_unique<SparseCombo>(std::vector<CMatrix>{a0, a_phi, a_psi});
  for (int x = 0; x < 3; ++x) m.l0_ops[x] = b[x];

  m.psi_number = a_psi.adjoint() * a_psi;
  m.number = a_phi.adjoint() * a_phi + m.psi_number;
  for (const auto& s : sig) m.number += s.adjoint() * s;
  return m;
}

struct Workspace {
  CMatrix t1, t2;
};

// d rho = M + M^H + sum_L L rho L^H with M = -i H_eff rho, for Hermitian rho.
void rhs(Model& m, cplx gphi, cplx gpsi, const CMatrix& rho, CMatrix& out, Workspace& w) {
  m.heff->set(heff_coeffs(gphi, gpsi));
  m.heff->apply(rho, w.t1);
  w.t1 *= -kI;
  out = w.t1 + w.t1.adjoint();
  auto jump = [&](const SparseCombo& l) {
    l.apply(rho, w.t1);           // L rho
    w.t2 = w.t1.adjoint();        // rho L^H
    l.apply(w.t2, w.t1);          // L rho L^H
    out += w.t1;
  };
  m.l0->set({1.0, std::conj(gphi), std::conj(gpsi)});
  jump(*m.l0);
  for (const auto& j : m.static_jumps) jump(*j);
}

double emission_rate(const Model& m, cplx gphi, cplx gpsi, const CMatrix& rho) {
  const CMatrix l = m.l0_ops[0] + std::conj(gphi) * m.l0_ops[1] + std::conj(gpsi) * m.l0_ops[2];
  return (l.adjoint() * l * rho).trace().real();
}

double loss_rate(const Model& m, const CMatrix& rho) { return (m.loss_number * rho).trace().real(); }

std::vector<double> cumulative_trapezoid(const std::vector<cplx>& f, double h) {
  std::vector<double> cum(f.size(), 0.0);
  for (std::size_t i = 1; i < f.size(); ++i) cum[i] = cum[i - 1] + 0.5 * h * (std::norm(f[i - 1]) + std::norm(f[i]));
  return cum;
}

}  // namespace

CouplingSchedule couplings(const std::vector<cplx>& phi_t, const std::vector<cplx>& psi_t,
                           const std::vector<double>& t) {
  if (phi_t.size() != t.size() || psi_t.size() != t.size() || t.size() < 2) {
    throw std::invalid_argument("coupling samples must match the time grid");
  }
  const double h = t[1] - t[0];
  if (!(h > 0.0)) throw std::invalid_argument("time grid must increase");
  const std::vector<double> cphi = cumulative_trapezoid(phi_t, h);
  const std::vector<double> cpsi = cumulative_trapezoid(psi_t, h);
  const double nphi = cphi.back();
  const double npsi = cpsi.back();
  if (!(nphi > 0.0) || !(npsi > 0.0)) throw std::invalid_argument("modes must have support on the span");

  CouplingSchedule s;
  s.times = t;
  s.g_phi.resize(t.size());
  s.g_psi.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double remaining = 1.0 - cphi[i] / nphi;
    s.g_phi[i] = remaining < kPhiCutoff ? cplx(0.0) : std::conj(phi_t[i]) / std::sqrt(nphi * remaining);
    const double accumulated = cpsi[i] / npsi;
    s.g_psi[i] = accumulated > kPsiStart ? -std::conj(psi_t[i]) / std::sqrt(npsi * accumulated) : cplx(0.0);
  }
  return s;
}

int CascadeSystem::dimension() const {
  int d = (n_max + 1) * (n_max + 1);
  for (std::size_t i = 0; i < chain.size(); ++i) d *= 2;
  return d;
}

CascadeSystem make_cascade(const EmitterChain& chain, const Pulse& phi, double ring_down, double dt) {
  const Pulse psi = normalize(apply_single_photon(chain, phi));
  return make_cascade(chain, phi, psi, ring_down, dt);
}

CascadeSystem make_cascade(const EmitterChain& chain, const Pulse& phi, const Pulse& psi, double ring_down,
                           double dt) {
  require_chain(chain);
  require_same_grid(phi.grid, psi.grid);
  if (phi.domain != Domain::momentum || psi.domain != Domain::momentum) {
    throw std::invalid_argument("cascade modes must be given in the momentum domain");
  }
  if (!(dt > 0.0) || !(ring_down >= 0.0)) throw std::invalid_argument("bad cascade time parameters");
  const Grid& g = phi.grid;
  const Pulse pt = to_time_domain(phi);
  const Pulse qt = to_time_domain(psi);
  const double h = g.dt();
  auto edges = [&](const Pulse& p) {
    std::vector<double> cum(g.n + 1, 0.0);
    for (int m = 0; m < g.n; ++m) cum[m + 1] = cum[m] + std::norm(p.amp[m]) * h;
    const double total = cum.back();
    int lo = 0;
    while (lo < g.n && cum[lo + 1] < kEdgeMass * total) ++lo;
    int hi = g.n - 1;
    while (hi > 0 && total - cum[hi] < kEdgeMass * total) --hi;
    return std::pair<double, double>{g.t(lo) - h, g.t(hi) + h};
  };
  const auto [phi_lo, phi_hi] = edges(pt);
  const double psi_hi = edges(qt).second;
  double slowest = 0.0;
  for (const auto& e : chain.emitters) slowest = std::max(slowest, 1.0 / e.gamma_tot());

  CascadeSystem sys;
  sys.chain = chain;
  sys.phi = phi;
  sys.psi = psi;
  sys.dt = dt;
  sys.t_start = phi_lo;
  const double end = std::max(phi_hi + ring_down * slowest, psi_hi);
  const double steps = std::ceil((end - sys.t_start) / dt);
  sys.t_end = sys.t_start + steps * dt;
  return sys;
}

CouplingSchedule schedule_for(const CascadeSystem& sys) {
  const long steps = std::lround((sys.t_end - sys.t_start) / sys.dt);
  if (steps < 1) throw std::invalid_argument("empty cascade span");
  std::vector<double> t(2 * steps + 1);
  for (long i = 0; i <= 2 * steps; ++i) t[i] = sys.t_start + 0.5 * sys.dt * static_cast<double>(i);
  return couplings(sample_time(sys.phi, t), sample_time(sys.psi, t), t);
}

int basis_index(int n_phi, const std::vector<int>& excited, int n_psi, int n_emitters, int n_max) {
  if (static_cast<int>(excited.size()) != n_emitters) throw std::invalid_argument("one excitation flag per emitter");
  int idx = n_phi;
  for (int e : excited) idx = idx * 2 + e;
  return idx * (n_max + 1) + n_psi;
}

EvolveResult evolve(const EmitterChain& chain, const CouplingSchedule& sched, const CMatrix& rho0, int n_max) {
  require_chain(chain);
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  const std::size_t samples = sched.times.size();
  if (samples < 3 || samples % 2 == 0) throw std::invalid_argument("schedule must hold 2*steps+1 half-step samples");
  Model m = build_model(chain, n_max);
  if (rho0.rows() != m.dim || rho0.cols() != m.dim) throw std::invalid_argument("initial state has the wrong dimension");

  const double dt = 2.0 * (sched.times[1] - sched.times[0]);
  const int steps = static_cast<int>((samples - 1) / 2);
  EvolveResult res;
  res.min_eigenvalue = 0.0;
  CMatrix rho = rho0;
  CMatrix k1, k2, k3, k4, tmp;
  Workspace w;

  auto check = [&](const CMatrix& r) {
    res.trace_drift = std::max(res.trace_drift, std::abs(r.trace() - 1.0));
    res.hermiticity_error = std::max(res.hermiticity_error, (r - r.adjoint()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (r + r.adjoint()), Eigen::EigenvaluesOnly);
    res.min_eigenvalue = std::min(res.min_eigenvalue, es.eigenvalues().minCoeff());
    if (res.trace_drift > kMaxTraceDrift) {
      throw std::runtime_error("cascade trace drifted by " + std::to_string(res.trace_drift) + "; reduce dt");
    }
  };
  check(rho);

  double prev_emit = emission_rate(m, sched.g_phi[0], sched.g_psi[0], rho);
  double prev_loss = loss_rate(m, rho);
  for (int s = 0; s < steps; ++s) {
    const std::size_t i0 = 2 * s, ih = i0 + 1, i1 = i0 + 2;
    rhs(m, sched.g_phi[i0], sched.g_psi[i0], rho, k1, w);
    tmp = rho + (0.5 * dt) * k1;
    rhs(m, sched.g_phi[ih], sched.g_psi[ih], tmp, k2, w);
    tmp = rho + (0.5 * dt) * k2;
    rhs(m, sched.g_phi[ih], sched.g_psi[ih], tmp, k3, w);
    tmp = rho + dt * k3;
    rhs(m, sched.g_phi[i1], sched.g_psi[i1], tmp, k4, w);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double emit = emission_rate(m, sched.g_phi[i1], sched.g_psi[i1], rho);
    const double loss = loss_rate(m, rho);
    res.emitted += 0.5 * dt * (prev_emit + emit);
    res.lost += 0.5 * dt * (prev_loss + loss);
    prev_emit = emit;
    prev_loss = loss;
    if ((s + 1) % kCheckEvery == 0 || s + 1 == steps) check(rho);
  }
  res.steps = steps;
  res.final_excitation = (m.number * rho).trace().real();
  res.final_system_excitation = res.final_excitation - (m.psi_number * rho).trace().real();

  const int np = n_max + 1;
  const int rest = m.dim / np;
  CMatrix reduced = CMatrix::Zero(np, np);
  for (int r = 0; r < rest; ++r) reduced += rho.block(r * np, r * np, np, np);
  res.output_populations.resize(np);
  for (int a = 0; a < np; ++a) {
    res.output_populations[a] = reduced(a, a).real();
    for (int b = 0; b < np; ++b) {
      if (a != b) res.output_coherence = std::max(res.output_coherence, std::abs(reduced(a, b)));
    }
  }
  res.rho = std::move(rho);
  return res;
}

EvolveResult evolve(const CascadeSystem& sys, int n_photons) {
  if (n_photons < 1 || n_photons > sys.n_max) throw std::invalid_argument("photon number must lie in [1, n_max]");
  const int ne = static_cast<int>(sys.chain.size());
  const int dim = sys.dimension();
  CMatrix rho0 = CMatrix::Zero(dim, dim);
  const int i = basis_index(n_photons, std::vector<int>(ne, 0), 0, ne, sys.n_max);
  rho0(i, i) = 1.0;
  return evolve(sys.chain, schedule_for(sys), rho0, sys.n_max);
}

std::vector<DephasingRow> dephasing_sweep(const CascadeSystem& sys, const std::vector<double>& gamma_p) {
  for (double g : gamma_p) {
    if (!(g >= 0.0)) throw std::invalid_argument("dephasing rates must be non-negative");
  }
  const CouplingSchedule sched = schedule_for(sys);
  const int ne = static_cast<int>(sys.chain.size());
  const int dim = sys.dimension();
  std::vector<DephasingRow> rows(gamma_p.size());
  const long tasks = static_cast<long>(2 * gamma_p.size());
  std::vector<std::string> errors(tasks);
#pragma omp parallel for schedule(dynamic)
  for (long task = 0; task < tasks; ++task) {
    const std::size_t row = static_cast<std::size_t>(task / 2);
    const int photons = 1 + static_cast<int>(task % 2);
    try {
      EmitterChain chain = sys.chain;
      for (auto& e : chain.emitters) e.gamma_p = gamma_p[row];
      CMatrix rho0 = CMatrix::Zero(dim, dim);
      const int i = basis_index(photons, std::vector<int>(ne, 0), 0, ne, sys.n_max);
      rho0(i, i) = 1.0;
      const EvolveResult r = evolve(chain, sched, rho0, sys.n_max);
      rows[row].gamma_p = gamma_p[row];
      if (photons == 1) {
        rows[row].F1 = r.output_populations[1];
      } else {
        rows[row].F2 = r.output_populations[0];
      }
    } catch (const std::exception& e) {
      errors[task] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw std::runtime_error(e);
  }
  return rows;
}

}  // namespace psort::oracle
