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

#include <cmath>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "psort/modal.hpp"
#include "psort/oracle.hpp"
#include "psort/validate.hpp"

using namespace psort;
using namespace psort::oracle;

TEST_SUITE("oracle") {
  TEST_CASE("square pulse couplings") {
    const double T = 4.0;
    const int n = 4001;
    std::vector<double> t(n);
    std::vector<cplx> phi(n), psi(n);
    const cplx c = std::exp(kI * 0.4) / std::sqrt(T);
    for (int i = 0; i < n; ++i) {
      t[i] = T * i / (n - 1);
      phi[i] = c;
      psi[i] = c;
    }
    const CouplingSchedule s = couplings(phi, psi, t);
    CHECK(std::abs(s.g_phi[0] - std::conj(c)) < 1e-12);
    for (int i = 0; i < n; i += 97) {
      if (t[i] > 0.9 * T) break;
      CHECK(std::abs(s.g_phi[i] - std::conj(c) / std::sqrt(1.0 - t[i] / T)) < 1e-8);
    }
    CHECK(s.g_phi.back() == cplx(0.0));
    // Output coupling: -conj(psi)/sqrt(t/T), zero before any norm has accumulated.
    CHECK(s.g_psi[0] == cplx(0.0));
    for (int i = 100; i < n; i += 97) CHECK(std::abs(s.g_psi[i] + std::conj(c) / std::sqrt(t[i] / T)) < 1e-8);
  }

  TEST_CASE("basis indices") {
    for (int ne : {1, 2}) {
      std::set<int> seen;
      const int dim = 9 * (1 << ne);
      for (int a = 0; a <= 2; ++a) {
        for (int e = 0; e < (1 << ne); ++e) {
          for (int b = 0; b <= 2; ++b) {
            std::vector<int> ex;
            for (int k = ne - 1; k >= 0; --k) ex.push_back((e >> k) & 1);
            const int i = basis_index(a, ex, b, ne, 2);
            CHECK(i >= 0);
            CHECK(i < dim);
            seen.insert(i);
          }
        }
      }
      CHECK(static_cast<int>(seen.size()) == dim);
    }
  }

  TEST_CASE("dark state is stationary") {
    for (int ne : {1, 2}) {
      const auto chain = EmitterChain::identical(ne);
      CouplingSchedule s;
      for (int i = 0; i < 201; ++i) {
        s.times.push_back(1e-3 * i);
        s.g_phi.push_back(0.0);
        s.g_psi.push_back(0.0);
      }
      const int dim = 9 * (1 << ne);
      CMatrix rho0 = CMatrix::Zero(dim, dim);
      const int g = basis_index(0, std::vector<int>(ne, 0), 0, ne, 2);
      rho0(g, g) = 1.0;
      const EvolveResult r = evolve(chain, s, rho0);
      CHECK(test::max_abs(r.rho - rho0) < 1e-12);
    }
  }

  TEST_CASE("cascade rejects unsupported chains") {
    const Pulse p = gaussian_pulse(fast_grid());
    CHECK_THROWS(make_cascade(EmitterChain::identical(3), p));
    CHECK_THROWS(make_cascade(EmitterChain{}, p));
    const auto sys = make_cascade(EmitterChain::identical(1), p);
    CHECK(sys.dimension() == 18);
    CHECK(sys.t_end > sys.t_start + 12.0);
    CHECK_THROWS(evolve(sys, 3));
  }

  TEST_CASE("single emitter cascade matches the kernel") {
    const auto chain = EmitterChain::identical(1);
    const Pulse p = gaussian_pulse(fast_grid());
    const SortingReport rep = sorting_report(chain, p);
    const auto sys = make_cascade(chain, p);
    const EvolveResult one = evolve(sys, 1);
    const EvolveResult two = evolve(sys, 2);
    CHECK(std::abs(one.output_populations[1] - 1.0) < 1e-3);
    CHECK(std::abs(two.output_populations[2] - std::norm(rep.c2)) < 1e-3);
    CHECK(std::abs(two.output_populations[1] - rep.c1 * rep.c1) < 1e-3);
    CHECK(std::abs(two.output_populations[0] - (1.0 - rep.E)) < 1e-3);
    for (const auto* r : {&one, &two}) {
      CHECK(r->trace_drift < 1e-8);
      CHECK(r->hermiticity_error < 1e-10);
      CHECK(r->min_eigenvalue > -1e-8);
      CHECK(r->output_coherence < 1e-8);
      CHECK(r->final_system_excitation < 1e-4);
    }
    // Photon number: ring-down flux plus what the output cavity holds.
    CHECK(std::abs(one.emitted + one.final_excitation - 1.0) < 1e-4);
    CHECK(std::abs(two.emitted + two.final_excitation - 2.0) < 1e-4);
  }

  TEST_CASE("RK4 step convergence") {
    const auto chain = EmitterChain::identical(1);
    const Pulse p = gaussian_pulse(fast_grid());
    const EvolveResult a = evolve(make_cascade(chain, p, 12.0, 2e-3), 2);
    const EvolveResult b = evolve(make_cascade(chain, p, 12.0, 1e-3), 2);
    CHECK(std::abs(a.output_populations[0] - b.output_populations[0]) < 1e-6);
  }

  TEST_CASE("lossy emitter leaks into free space") {
    Emitter e;
    e.beta = 0.8;
    const auto chain = EmitterChain::identical(1, e);
    const auto sys = make_cascade(chain, gaussian_pulse(fast_grid()));
    const EvolveResult r = evolve(sys, 1);
    CHECK(r.lost > 0.05);
    CHECK(std::abs(r.emitted + r.lost + r.final_excitation - 1.0) < 1e-4);
  }

  TEST_CASE("dephasing lowers the single-photon fidelity") {
    const auto sys = make_cascade(EmitterChain::identical(1), gaussian_pulse(fast_grid()));
    const auto rows = dephasing_sweep(sys, {0.0, 0.05, 0.1});
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].F1 < rows[0].F1);
    CHECK(rows[2].F1 < rows[1].F1);
    CHECK_THROWS(dephasing_sweep(sys, {-0.1}));
  }

  TEST_CASE("two emitter cascade matches the kernel on the fast grid") {
    CHECK(oracle_defect(EmitterChain::identical(2), gaussian_pulse(fast_grid()), 2e-3) < 1e-3);
  }
}
