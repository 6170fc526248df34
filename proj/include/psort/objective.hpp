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

#include <functional>
#include <string>

#include "psort/grid.hpp"
#include "psort/scattering.hpp"

namespace psort {

enum class ObjectiveKind {
  plain_E,                ///< E
  total_E_minus_N2,       ///< E - N2, maximizes the total fidelity
  conditional_E_over_N2,  ///< E / N2, maximizes the conditional fidelity
};

std::string to_string(ObjectiveKind kind);
ObjectiveKind objective_from_string(const std::string& name);

/// Scalars of one objective evaluation.
struct ObjectiveTerms {
  double E = 0.0;
  double N1 = 0.0;
  double N2 = 0.0;
  double value = 0.0;
};

struct GradientResult {
  double value = 0.0;
  Pulse grad;  ///< dObjective/dphi* on the input grid
  ObjectiveTerms terms;
};

/// Sorting error from the contractions
///   g(k) = int dp L1(k,p) phi(p),   L2.phi = <psi, g>,
///   E = 2 |g|^2 / N1 - |<psi, g>|^2 / N1^2.
/// The pulse is used as given (no renormalization) so finite differences see
/// the same function the gradient differentiates.
double error_value(const EmitterChain& chain, const Pulse& p);

ObjectiveTerms objective_terms(const EmitterChain& chain, const Pulse& p, ObjectiveKind kind);

/// Wirtinger gradient dObjective/dphi*. One forward and one adjoint chain
/// application; for the lossy variants the N2 gradient 2 int dp1 phi*(p1)
/// (S^H S Phi)(p, p1) shares the same adjoint pass.
GradientResult gradient(const EmitterChain& chain, const Pulse& p, ObjectiveKind kind);

/// Apply the Hermitian error kernel H(phi) to x via L1 / L2 contractions,
/// with phi held fixed. <phi, H phi> == error_value(chain, phi).
Pulse apply_error_kernel(const EmitterChain& chain, const Pulse& phi, const Pulse& x);

struct FdOptions {
  double eps = 1e-5;
  int stride = 1;  ///< check every stride-th grid point (1 = all 2n coordinates)
};

/// Max over real coordinates of |central difference - analytic| divided by the
/// largest analytic component. For phi_j -> phi_j + eps the analytic directional
/// derivative is 2 dk Re grad_j; for phi_j -> phi_j + i eps it is 2 dk Im grad_j.
double fd_check(const std::function<double(const Pulse&)>& objective, const Pulse& grad, const Pulse& p,
                FdOptions opts = {});

double fd_check(const EmitterChain& chain, const Pulse& p, ObjectiveKind kind, FdOptions opts = {});

}  // namespace psort
