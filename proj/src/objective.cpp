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

#include "psort/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace psort {

std::string to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::plain_E: return "plain_E";
    case ObjectiveKind::total_E_minus_N2: return "total_E_minus_N2";
    case ObjectiveKind::conditional_E_over_N2: return "conditional_E_over_N2";
  }
  return "unknown";
}

ObjectiveKind objective_from_string(const std::string& name) {
  if (name == "plain_E" || name == "E") return ObjectiveKind::plain_E;
  if (name == "total_E_minus_N2" || name == "total") return ObjectiveKind::total_E_minus_N2;
  if (name == "conditional_E_over_N2" || name == "conditional") return ObjectiveKind::conditional_E_over_N2;
  throw std::invalid_argument("unknown objective '" + name + "'");
}

namespace {

struct ForwardPass {
  CVector trans;  // T(k_j)
  Pulse psi;      // T phi
  TwoPhotonState out;
  CVector g;      // int dk1 psi*(k1) Psi(k1, k)
  double N1 = 0.0;
  double N2 = 0.0;
  double G = 0.0;  // |g|^2
  cplx c2;         // <psi, g>
  double E = 0.0;
};

ForwardPass forward(const EmitterChain& chain, const Pulse& p) {
  if (p.domain != Domain::momentum) throw std::invalid_argument("objective expects a momentum-domain pulse");
  const Grid& grid = p.grid;
  const double dk = grid.dk;
  ForwardPass f;
  f.trans.resize(grid.n);
  for (int j = 0; j < grid.n; ++j) f.trans[j] = transmission(chain, grid.k(j));
  f.psi = Pulse{grid, f.trans.cwiseProduct(p.amp), Domain::momentum};
  f.out = apply_two_photon_chain(chain, TwoPhotonState{grid, p.amp * p.amp.transpose()});
  f.N1 = f.psi.norm2();
  f.N2 = f.out.norm2();
  f.g = (f.out.amp.transpose() * f.psi.amp.conjugate()) * dk;
  f.G = f.g.squaredNorm() * dk;
  f.c2 = f.psi.amp.dot(f.g) * dk;
  f.E = 2.0 * f.G / f.N1 - std::norm(f.c2) / (f.N1 * f.N1);
  return f;
}

double combine(ObjectiveKind kind, double E, double N2) {
  switch (kind) {
    case ObjectiveKind::plain_E: return E;
    case ObjectiveKind::total_E_minus_N2: return E - N2;
    case ObjectiveKind::conditional_E_over_N2: return E / N2;
  }
  return E;
}

// r[Q](k1) = int dk2 (S^H Q)(k1, k2) phi*(k2)
CVector adjoint_contract(const EmitterChain& chain, const TwoPhotonState& q, const Pulse& phi) {
  const TwoPhotonState r = adjoint_two_photon_chain(chain, q);
  return (r.amp * phi.amp.conjugate()) * phi.grid.dk;
}

CMatrix sym_outer(const CVector& a, const CVector& b) {
  CMatrix m = a * b.transpose();
  return 0.5 * (m + m.transpose());
}

}  // namespace

double error_value(const EmitterChain& chain, const Pulse& p) { return forward(chain, p).E; }

ObjectiveTerms objective_terms(const EmitterChain& chain, const Pulse& p, ObjectiveKind kind) {
  const ForwardPass f = forward(chain, p);
  return ObjectiveTerms{f.E, f.N1, f.N2, combine(kind, f.E, f.N2)};
}

GradientResult gradient(const EmitterChain& chain, const Pulse& p, ObjectiveKind kind) {
  const ForwardPass f = forward(chain, p);
  const Grid& grid = p.grid;
  const double dk = grid.dk;
  const double N1 = f.N1;
  const double N1sq = N1 * N1;

  // Terms where phi enters through psi = T phi (and psi*).
  const CVector tconj = f.trans.conjugate();
  const CVector h = (f.out.amp * f.g.conjugate()) * dk;
  const CVector t2phi = f.trans.cwiseAbs2().cwiseProduct(p.amp);
  const double C2 = std::norm(f.c2);
  CVector base = (2.0 / N1) * tconj.cwiseProduct(h) - (2.0 / N1sq) * tconj.cwiseProduct(std::conj(f.c2) * f.g) +
                 (-2.0 * f.G / N1sq + 2.0 * C2 / (N1sq * N1)) * t2phi;

  // Terms where phi enters through Psi = S(phi phi), gathered into one adjoint pass.
  CMatrix q = (2.0 / N1) * sym_outer(f.psi.amp, f.g) - (f.c2 / N1sq) * (f.psi.amp * f.psi.amp.transpose());
  double value = f.E;
  switch (kind) {
    case ObjectiveKind::plain_E:
      break;
    case ObjectiveKind::total_E_minus_N2:
      q -= f.out.amp;
      value = f.E - f.N2;
      break;
    case ObjectiveKind::conditional_E_over_N2:
      base /= f.N2;
      q = q / f.N2 - (f.E / (f.N2 * f.N2)) * f.out.amp;
      value = f.E / f.N2;
      break;
  }
  const CVector r = adjoint_contract(chain, TwoPhotonState{grid, std::move(q)}, p);

  GradientResult res;
  res.value = value;
  res.grad = Pulse{grid, base + 2.0 * r, Domain::momentum};
  res.terms = ObjectiveTerms{f.E, f.N1, f.N2, value};
  if (!std::isfinite(value)) throw std::runtime_error("non-finite objective");
  return res;
}

Pulse apply_error_kernel(const EmitterChain& chain, const Pulse& phi, const Pulse& x) {
  require_same_grid(phi.grid, x.grid);
  const Grid& grid = phi.grid;
  const double dk = grid.dk;
  Pulse psi = apply_single_photon(chain, phi);
  const double N1 = psi.norm2();
  // y = L1 x
  const TwoPhotonState sx = apply_two_photon_chain(chain, TwoPhotonState{grid, sym_outer(phi.amp, x.amp)});
  const CVector y = (sx.amp.transpose() * psi.amp.conjugate()) * dk;
  const cplx proj = psi.amp.dot(y) * dk;
  const CVector z = (2.0 / N1) * y - (proj / (N1 * N1)) * psi.amp;
  // H x = L1^H z
  const CVector out = adjoint_contract(chain, TwoPhotonState{grid, sym_outer(psi.amp, z)}, phi);
  return Pulse{grid, out, Domain::momentum};
}

double fd_check(const std::function<double(const Pulse&)>& objective, const Pulse& grad, const Pulse& p,
                FdOptions opts) {
  if (!(opts.eps >= 1e-7 && opts.eps <= 1e-3)) throw std::invalid_argument("fd_check eps must lie in [1e-7, 1e-3]");
  require_same_grid(grad.grid, p.grid);
  const double dk = p.grid.dk;
  const int n = p.grid.n;
  const int stride = std::max(1, opts.stride);
  double scale = 0.0;
  for (int j = 0; j < n; ++j) {
    scale = std::max({scale, std::abs(2.0 * dk * grad.amp[j].real()), std::abs(2.0 * dk * grad.amp[j].imag())});
  }
  if (scale == 0.0) scale = 1.0;

  double worst = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : worst)
  for (int j = 0; j < n; j += stride) {
    for (int part = 0; part < 2; ++part) {
      const cplx dir = part == 0 ? cplx(opts.eps, 0.0) : cplx(0.0, opts.eps);
      Pulse plus = p;
      Pulse minus = p;
      plus.amp[j] += dir;
      minus.amp[j] -= dir;
      const double fd = (objective(plus) - objective(minus)) / (2.0 * opts.eps);
      const double analytic = 2.0 * dk * (part == 0 ? grad.amp[j].real() : grad.amp[j].imag());
      worst = std::max(worst, std::abs(fd - analytic) / scale);
    }
  }
  return worst;
}

double fd_check(const EmitterChain& chain, const Pulse& p, ObjectiveKind kind, FdOptions opts) {
  const GradientResult gr = gradient(chain, p, kind);
  return fd_check([&](const Pulse& q) { return objective_terms(chain, q, kind).value; }, gr.grad, p, opts);
}

}  // namespace psort
