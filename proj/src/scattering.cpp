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

#include "psort/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psort {

void Emitter::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("emitter coupling rate must be positive");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("emitter beta must lie in (0, 1]");
  if (!(gamma_p >= 0.0)) throw std::invalid_argument("dephasing rate must be non-negative");
  if (!std::isfinite(delta)) throw std::invalid_argument("emitter detuning must be finite");
}

bool EmitterChain::lossless() const {
  for (const auto& e : emitters) {
    if (e.beta < 1.0) return false;
  }
  return true;
}

void EmitterChain::validate() const {
  for (const auto& e : emitters) e.validate();
}

EmitterChain EmitterChain::identical(int count, Emitter e) {
  return EmitterChain{std::vector<Emitter>(static_cast<std::size_t>(count), e)};
}

double TwoPhotonState::asymmetry() const {
  const Eigen::Index n = amp.rows();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) worst = std::max(worst, std::abs(amp(i, j) - amp(j, i)));
  }
  return worst;
}

cplx transmission(const Emitter& e, double k) {
  const double gt = e.gamma_tot();
  const double x = k - e.delta;
  return cplx(x, 0.5 * gt * (1.0 - 2.0 * e.beta)) / cplx(x, 0.5 * gt);
}

cplx transmission(const EmitterChain& chain, double k) {
  cplx t = 1.0;
  for (const auto& e : chain.emitters) t *= transmission(e, k);
  return t;
}

Pulse apply_single_photon(const EmitterChain& chain, const Pulse& p) {
  if (p.domain != Domain::momentum) throw std::invalid_argument("scattering acts on momentum-domain pulses");
  Pulse out = p;
  for (int j = 0; j < p.grid.n; ++j) out.amp[j] *= transmission(chain, p.grid.k(j));
  return out;
}

cplx bound_constant(const Emitter& e) { return kI * e.gamma * e.gamma / kPi; }

kernels::EmitterCoeffs emitter_coeffs(const Emitter& e, const Grid& g) {
  kernels::EmitterCoeffs c;
  c.s.resize(g.n);
  c.t.resize(g.n);
  const double half = 0.5 * e.gamma_tot();
  for (int j = 0; j < g.n; ++j) {
    c.s[j] = 1.0 / cplx(g.k(j) - e.delta, half);
    c.t[j] = transmission(e, g.k(j));
  }
  c.bound = bound_constant(e);
  c.dk = g.dk;
  return c;
}

namespace {

void require_symmetric(const TwoPhotonState& s) {
  const double scale = std::max(1.0, s.amp.cwiseAbs().maxCoeff());
  if (s.asymmetry() > 1e-12 * scale) throw std::invalid_argument("two-photon amplitude is not symmetric");
}

TwoPhotonState forward_unchecked(const Emitter& e, const TwoPhotonState& s, Backend backend) {
  const auto c = emitter_coeffs(e, s.grid);
  TwoPhotonState out{s.grid, {}};
  if (backend == Backend::serial) {
    kernels::serial::emitter_forward(c, s.amp, out.amp);
  } else {
    kernels::omp::emitter_forward(c, s.amp, out.amp);
  }
  return out;
}

}  // namespace

TwoPhotonState apply_two_photon_emitter(const Emitter& e, const TwoPhotonState& s, Backend backend) {
  require_symmetric(s);
  return forward_unchecked(e, s, backend);
}

TwoPhotonState apply_two_photon_chain(const EmitterChain& chain, const TwoPhotonState& s, Backend backend) {
  require_symmetric(s);
  TwoPhotonState cur = s;
  for (const auto& e : chain.emitters) cur = forward_unchecked(e, cur, backend);
  return cur;
}

TwoPhotonState adjoint_two_photon_emitter(const Emitter& e, const TwoPhotonState& s, Backend backend) {
  const auto c = emitter_coeffs(e, s.grid);
  TwoPhotonState out{s.grid, {}};
  if (backend == Backend::serial) {
    kernels::serial::emitter_adjoint(c, s.amp, out.amp);
  } else {
    kernels::omp::emitter_adjoint(c, s.amp, out.amp);
  }
  return out;
}

TwoPhotonState adjoint_two_photon_chain(const EmitterChain& chain, const TwoPhotonState& s, Backend backend) {
  TwoPhotonState cur = s;
  for (auto it = chain.emitters.rbegin(); it != chain.emitters.rend(); ++it) {
    cur = adjoint_two_photon_emitter(*it, cur, backend);
  }
  return cur;
}

TwoPhotonState product_state(const Pulse& p) {
  if (std::abs(p.norm2() - 1.0) > 1e-10) throw std::invalid_argument("product_state requires a normalized pulse");
  return TwoPhotonState{p.grid, p.amp * p.amp.transpose()};
}

TwoPhotonState symmetric_product(const Pulse& a, const Pulse& b) {
  require_same_grid(a.grid, b.grid);
  CMatrix m = a.amp * b.amp.transpose();
  CMatrix sym = 0.5 * (m + m.transpose());
  return TwoPhotonState{a.grid, std::move(sym)};
}

TwoPhotonState negate_momenta(const TwoPhotonState& s) {
  const Grid& g = s.grid;
  TwoPhotonState out{g, CMatrix(g.n, g.n)};
  for (int j = 0; j < g.n; ++j) {
    const int nj = g.negated(j);
    for (int i = 0; i < g.n; ++i) out.amp(i, j) = s.amp(g.negated(i), nj);
  }
  return out;
}

TwoPhotonState phase_ramp(const TwoPhotonState& s, double t_d) {
  const Grid& g = s.grid;
  CVector ph(g.n);
  for (int j = 0; j < g.n; ++j) ph[j] = std::polar(1.0, g.k(j) * t_d);
  TwoPhotonState out{g, ph.asDiagonal() * s.amp * ph.asDiagonal()};
  return out;
}

cplx inner(const TwoPhotonState& a, const TwoPhotonState& b) {
  require_same_grid(a.grid, b.grid);
  const double w = a.grid.dk * a.grid.dk;
  // sum conj(a) b
  return (a.amp.conjugate().cwiseProduct(b.amp)).sum() * w;
}

}  // namespace psort
