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

#include <cstdint>
#include <string>
#include <vector>

#include "psort/grid.hpp"
#include "psort/scattering.hpp"

namespace psort {

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// max over states of | |S Psi| / |Psi| - 1 | for random symmetric states.
double unitarity_deviation(const EmitterChain& chain, const Grid& g, int states, std::uint64_t seed);

/// max |serial - openmp| over forward and adjoint maps on a random state.
double backend_difference(const Emitter& e, const Grid& g, std::uint64_t seed);

/// |<Y, S X> - <S^H Y, X>| for random symmetric X, Y.
double adjoint_defect(const EmitterChain& chain, const Grid& g, std::uint64_t seed);

/// Max fd_check error over random pulses.
double gradient_defect(const EmitterChain& chain, const Grid& g, int pulses, std::uint64_t seed, int kind_index,
                       int stride = 1);

/// Max difference between the cascade oracle's psi-cavity populations and the
/// kernel (1-E, |c1|^2, |c2|^2) for two photons, and N1 for one photon.
double oracle_defect(const EmitterChain& chain, const Pulse& p, double dt = 1e-3);

struct ValidationOptions {
  bool fast = false;
  std::uint64_t seed = 7;
};

/// Unitarity, adjoint, backend, gradient, Takagi and oracle checks.
std::vector<Check> validation_suite(const ValidationOptions& opts);

}  // namespace psort
