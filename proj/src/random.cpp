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

#include "psort/random.hpp"

#include <cmath>

namespace psort {

RandomBumps RandomBumps::draw(std::mt19937_64& rng, int count, double spread) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> center(-spread, spread);
  std::uniform_real_distribution<double> width(0.4, 1.5);
  RandomBumps out;
  for (int i = 0; i < count; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    const double c = center(rng);
    const double w = width(rng);
    out.bumps.push_back(Bump{cplx(re, im), c, w});
  }
  return out;
}

cplx RandomBumps::operator()(double k) const {
  cplx v = 0.0;
  for (const auto& b : bumps) {
    const double x = (k - b.center) / b.width;
    v += b.weight * std::exp(-0.5 * x * x);
  }
  return v;
}

Pulse RandomBumps::sample(const Grid& g) const {
  return normalize(from_function(g, [this](double k) { return (*this)(k); }));
}

RandomTwoPhoton RandomTwoPhoton::draw(std::mt19937_64& rng, int terms) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RandomTwoPhoton out;
  for (int i = 0; i < terms; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    out.coeffs.emplace_back(re, im);
    out.modes.push_back(RandomBumps::draw(rng, 2));
  }
  out.a = RandomBumps::draw(rng, 2);
  out.b = RandomBumps::draw(rng, 2);
  return out;
}

TwoPhotonState RandomTwoPhoton::sample(const Grid& g) const {
  CMatrix m = symmetric_product(a.sample(g), b.sample(g)).amp;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const CVector f = modes[i].sample(g).amp;
    m.noalias() += coeffs[i] * f * f.transpose();
  }
  TwoPhotonState s{g, std::move(m)};
  s.amp /= std::sqrt(s.norm2());
  return s;
}

}  // namespace psort
