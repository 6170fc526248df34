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

#include "psort/validate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "psort/kernels.hpp"
#include "psort/modal.hpp"
#include "psort/objective.hpp"
#include "psort/oracle.hpp"
#include "psort/random.hpp"

namespace psort {

double unitarity_deviation(const EmitterChain& chain, const Grid& g, int states, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < states; ++i) {
    const TwoPhotonState in = RandomTwoPhoton::draw(rng).sample(g);
    const TwoPhotonState out = apply_two_photon_chain(chain, in);
    worst = std::max(worst, std::abs(std::sqrt(out.norm2() / in.norm2()) - 1.0));
  }
  return worst;
}

double backend_difference(const Emitter& e, const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const TwoPhotonState in = RandomTwoPhoton::draw(rng).sample(g);
  const auto fs = apply_two_photon_emitter(e, in, Backend::serial);
  const auto fo = apply_two_photon_emitter(e, in, Backend::openmp);
  const auto as = adjoint_two_photon_emitter(e, in, Backend::serial);
  const auto ao = adjoint_two_photon_emitter(e, in, Backend::openmp);
  return std::max((fs.amp - fo.amp).cwiseAbs().maxCoeff(), (as.amp - ao.amp).cwiseAbs().maxCoeff());
}

double adjoint_defect(const EmitterChain& chain, const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const TwoPhotonState x = RandomTwoPhoton::draw(rng).sample(g);
  const TwoPhotonState y = RandomTwoPhoton::draw(rng).sample(g);
  const cplx lhs = inner(y, apply_two_photon_chain(chain, x));
  const cplx rhs = inner(adjoint_two_photon_chain(chain, y), x);
  return std::abs(lhs - rhs);
}

double gradient_defect(const EmitterChain& chain, const Grid& g, int pulses, std::uint64_t seed, int kind_index,
                       int stride) {
  std::mt19937_64 rng(seed);
  const auto kind = static_cast<ObjectiveKind>(kind_index);
  double worst = 0.0;
  for (int i = 0; i < pulses; ++i) {
    const Pulse p = RandomBumps::draw(rng).sample(g);
    FdOptions opts;
    opts.stride = stride;
    worst = std::max(worst, fd_check(chain, p, kind, opts));
  }
  return worst;
}

double oracle_defect(const EmitterChain& chain, const Pulse& p, double dt) {
  const SortingReport rep = sorting_report(chain, p);
  const oracle::CascadeSystem sys = oracle::make_cascade(chain, p, 12.0, dt);
  const oracle::EvolveResult one = oracle::evolve(sys, 1);
  const oracle::EvolveResult two = oracle::evolve(sys, 2);
  const double c1_sq = rep.c1 * rep.c1;
  const double c2_sq = std::norm(rep.c2);
  double d = std::abs(one.output_populations[1] - rep.N1);
  d = std::max(d, std::abs(two.output_populations[0] - (1.0 - c1_sq - c2_sq)));
  d = std::max(d, std::abs(two.output_populations[1] - c1_sq));
  d = std::max(d, std::abs(two.output_populations[2] - c2_sq));
  return d;
}

std::vector<Check> validation_suite(const ValidationOptions& opts) {
  const Grid g = opts.fast ? fast_grid() : default_grid();
  const int states = opts.fast ? 10 : 50;
  const double unit_tol = opts.fast ? 1e-3 : 1e-5;
  const EmitterChain one = EmitterChain::identical(1);
  const EmitterChain two = EmitterChain::identical(2);
  Emitter lossy_e;
  lossy_e.beta = 0.9;
  const EmitterChain lossy = EmitterChain::identical(2, lossy_e);
  const int stride = opts.fast ? 1 : 8;

  std::vector<Check> out;
  auto add = [&out](std::string name, double value, double tol) {
    out.push_back(Check{std::move(name), value, tol, value <= tol});
  };
  add("unitarity_1_emitter", unitarity_deviation(one, g, states, opts.seed), unit_tol);
  add("unitarity_2_emitters", unitarity_deviation(two, g, states, opts.seed + 1), unit_tol);
  add("adjoint_identity", adjoint_defect(two, g, opts.seed + 2), 1e-10);
  add("serial_vs_openmp", backend_difference(Emitter{}, g, opts.seed + 3), 1e-12);
  add("gradient_fd_plain", gradient_defect(two, g, 2, opts.seed + 4, 0, stride), 1e-5);
  add("gradient_fd_total", gradient_defect(lossy, g, 1, opts.seed + 5, 1, stride), 1e-5);
  add("gradient_fd_conditional", gradient_defect(lossy, g, 1, opts.seed + 6, 2, stride), 1e-5);
  {
    std::mt19937_64 rng(opts.seed + 7);
    const TwoPhotonState s = RandomTwoPhoton::draw(rng).sample(g);
    const TakagiDecomposition td = takagi(s);
    add("takagi_reconstruct", (td.reconstruct().amp - s.amp).cwiseAbs().maxCoeff(), 1e-10);
  }
  add("oracle_vs_kernel", oracle_defect(two, gaussian_pulse(g), opts.fast ? 2e-3 : 1e-3), 1e-3);
  return out;
}

}  // namespace psort
