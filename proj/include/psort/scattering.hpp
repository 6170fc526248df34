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
#include "psort/kernels.hpp"

namespace psort {

/// Two-level emitter chirally coupled to the waveguide.
struct Emitter {
  double gamma = 1.0;    ///< coupling rate into the guided mode
  double delta = 0.0;    ///< resonance detuning
  double beta = 1.0;     ///< directional efficiency gamma/gamma_tot
  double gamma_p = 0.0;  ///< pure dephasing rate (Lindblad oracle only)

  double gamma_tot() const { return gamma / beta; }
  void validate() const;
};

/// Ordered emitters; photons meet emitters[0] first. An empty chain is the
/// identity and is accepted for testing.
struct EmitterChain {
  std::vector<Emitter> emitters;

  std::size_t size() const { return emitters.size(); }
  bool lossless() const;
  void validate() const;

  static EmitterChain identical(int count, Emitter e = {});
};

/// Symmetric two-photon amplitude Psi(k_i, k_j), normalized with dk^2 weights.
struct TwoPhotonState {
  Grid grid;
  CMatrix amp;

  double norm2() const { return amp.squaredNorm() * grid.dk * grid.dk; }
  double asymmetry() const;
  bool is_symmetric(double tol = 1e-12) const { return asymmetry() <= tol; }
};

enum class Backend { serial, openmp };

cplx transmission(const Emitter& e, double k);
cplx transmission(const EmitterChain& chain, double k);

/// psi(k) = T(k) phi(k). Not renormalized: for beta < 1 the output carries the
/// single-photon survival probability.
Pulse apply_single_photon(const EmitterChain& chain, const Pulse& p);

/// Constant of the correlated two-photon term for one emitter.
cplx bound_constant(const Emitter& e);

kernels::EmitterCoeffs emitter_coeffs(const Emitter& e, const Grid& g);

TwoPhotonState apply_two_photon_emitter(const Emitter& e, const TwoPhotonState& s,
                                        Backend backend = Backend::openmp);
TwoPhotonState apply_two_photon_chain(const EmitterChain& chain, const TwoPhotonState& s,
                                      Backend backend = Backend::openmp);

/// Exact discrete adjoints, restricted to symmetric states.
TwoPhotonState adjoint_two_photon_emitter(const Emitter& e, const TwoPhotonState& s,
                                          Backend backend = Backend::openmp);
TwoPhotonState adjoint_two_photon_chain(const EmitterChain& chain, const TwoPhotonState& s,
                                        Backend backend = Backend::openmp);

/// Phi(k1,k2) = phi(k1) phi(k2); requires a normalized pulse.
TwoPhotonState product_state(const Pulse& p);
/// (a(k1) b(k2) + b(k1) a(k2)) / 2, no normalization requirement.
TwoPhotonState symmetric_product(const Pulse& a, const Pulse& b);

TwoPhotonState negate_momenta(const TwoPhotonState& s);
TwoPhotonState phase_ramp(const TwoPhotonState& s, double t_d);

cplx inner(const TwoPhotonState& a, const TwoPhotonState& b);

}  // namespace psort
