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
#include <random>
#include <vector>

#include "psort/grid.hpp"
#include "psort/scattering.hpp"

namespace psort {

/// Smooth random amplitude: a sum of complex-weighted Gaussian bumps in k.
/// Stored as parameters so the same function can be sampled on any grid.
struct RandomBumps {
  struct Bump {
    cplx weight;
    double center = 0.0;
    double width = 1.0;
  };
  std::vector<Bump> bumps;

  static RandomBumps draw(std::mt19937_64& rng, int count = 4, double spread = 2.0);
  cplx operator()(double k) const;
  Pulse sample(const Grid& g) const;  ///< normalized
};

/// Random symmetric two-photon amplitude sum_m c_m f_m(k1) f_m(k2) +
/// (a(k1) b(k2) + b(k1) a(k2)) / 2 from random bump functions, normalized.
struct RandomTwoPhoton {
  std::vector<cplx> coeffs;
  std::vector<RandomBumps> modes;
  RandomBumps a, b;

  static RandomTwoPhoton draw(std::mt19937_64& rng, int terms = 3);
  TwoPhotonState sample(const Grid& g) const;
};

}  // namespace psort
