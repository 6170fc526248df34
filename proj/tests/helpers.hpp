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

#include <cmath>

#include "psort/grid.hpp"
#include "psort/scattering.hpp"

namespace psort::test {

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

/// min over alpha of ||a - e^{i alpha} b|| for normalized pulses.
inline double phase_distance(const Pulse& a, const Pulse& b) {
  const cplx ov = inner(b, a);
  const cplx ph = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx(1.0);
  Pulse d = a;
  d.amp -= ph * b.amp;
  return d.norm();
}

}  // namespace psort::test
