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

#include "doctest.h"
#include "helpers.hpp"
#include "psort/modal.hpp"
#include "psort/optimize.hpp"

using namespace psort;

namespace {

const OptimizationTrace& pair_trace() {
  static const OptimizationTrace t = gradient_flow(EmitterChain::identical(2), gaussian_pulse(fast_grid()));
  return t;
}

}  // namespace

TEST_SUITE("optimize") {
  TEST_CASE("parameter validation") {
    FlowParams p;
    CHECK_NOTHROW(p.validate());
    p.dtau = 0.0;
    CHECK_THROWS(p.validate());
    p = FlowParams{};
    p.tol = -1.0;
    CHECK_THROWS(p.validate());
    Pulse bad = gaussian_pulse(fast_grid());
    bad.amp *= 1.1;
    CHECK_THROWS(gradient_flow(EmitterChain::identical(1), bad));
    CHECK_THROWS(iterative_filter(EmitterChain::identical(1), bad));
  }

  TEST_CASE("matched fidelity") {
    CHECK(matched_fidelity(ObjectiveKind::plain_E, 0.1, 0.9) == doctest::Approx(0.9));
    CHECK(matched_fidelity(ObjectiveKind::total_E_minus_N2, 0.1, 0.9) == doctest::Approx(0.8));
    CHECK(matched_fidelity(ObjectiveKind::conditional_E_over_N2, 0.1, 0.8) == doctest::Approx(0.875));
  }

  TEST_CASE("flow keeps the pulse normalized and descends monotonically") {
    const auto& t = pair_trace();
    CHECK(t.converged);
    for (const auto& [iter, p] : t.snapshots) CHECK(std::abs(p.norm2() - 1.0) < 1e-12);
    CHECK(std::abs(t.final_pulse.norm2() - 1.0) < 1e-12);
    for (std::size_t i = 1; i < t.iterations.size(); ++i) {
      CHECK(t.iterations[i].objective <= t.iterations[i - 1].objective);
    }
    CHECK(t.last().fidelity > 0.999);
  }

  TEST_CASE("optimal pair: intermediate state is multimode, output single-mode") {
    const auto& t = pair_trace();
    ReportOptions ro;
    ro.with_takagi = true;
    const SortingReport one = sorting_report(EmitterChain::identical(1), t.final_pulse, ro);
    const SortingReport two = sorting_report(EmitterChain::identical(2), t.final_pulse, ro);
    CHECK(one.takagi->weight(0) < two.takagi->weight(0) - 0.05);
    CHECK(one.takagi->weight(1) > 0.01);
    CHECK(one.takagi->weight(2) > 0.01);
    CHECK(two.takagi->weight(0) > 0.985);
  }

  TEST_CASE("optimum is time-reversal symmetric") {
    const Pulse& p = pair_trace().final_pulse;
    CHECK(test::phase_distance(p, conj_reflect(p)) < 1e-3);
  }

  TEST_CASE("gauge quotient") {
    const Grid g = fast_grid();
    Pulse seed = gaussian_pulse(g);
    Pulse rotated = seed;
    rotated.amp *= std::exp(kI * 1.1);
    FlowParams fp;
    fp.max_iters = 40;
    const auto chain = EmitterChain::identical(1);
    const auto a = gradient_flow(chain, seed, fp);
    const auto b = gradient_flow(chain, rotated, fp);
    REQUIRE(a.iterations.size() == b.iterations.size());
    for (std::size_t i = 0; i < a.iterations.size(); ++i) {
      CHECK(std::abs(a.iterations[i].objective - b.iterations[i].objective) < 1e-10);
    }
  }

  TEST_CASE("optimum is a fixed point") {
    const auto& t = pair_trace();
    const auto again = gradient_flow(EmitterChain::identical(2), t.final_pulse);
    CHECK(again.converged);
    CHECK(again.last().iter <= 5);
    CHECK(std::abs(again.last().objective - t.last().objective) < 1e-9);
  }

  TEST_CASE("max_iters caps the run") {
    FlowParams fp;
    fp.max_iters = 7;
    fp.snapshot_every = 3;
    const auto t = gradient_flow(EmitterChain::identical(1), gaussian_pulse(fast_grid()), fp);
    CHECK(t.last().iter == 7);
    CHECK_FALSE(t.converged);
    CHECK(t.snapshots.back().first == 7);
  }

  TEST_CASE("single seed equals a plain flow") {
    const auto chain = EmitterChain::identical(2);
    const Pulse seed = gaussian_pulse(fast_grid());
    const auto m = multi_seed(chain, {seed}, FlowParams{});
    const auto& t = pair_trace();
    CHECK(m.best_index == 0);
    CHECK(m.spread == 0.0);
    CHECK(m.best.iterations.size() == t.iterations.size());
    CHECK(test::max_abs(m.best.final_pulse.amp - t.final_pulse.amp) == 0.0);
    CHECK_THROWS(multi_seed(chain, {}, FlowParams{}));
  }

  TEST_CASE("standard seeds agree on the pair optimum") {
    const auto m = multi_seed(EmitterChain::identical(2), standard_seeds(fast_grid()), FlowParams{});
    CHECK(m.final_objectives.size() == 3);
    CHECK(m.spread < 1e-3);
    CHECK(1.0 - m.best.last().objective > 0.999);
  }

  TEST_CASE("iterative filter reaches the flow fidelity") {
    const auto chain = EmitterChain::identical(2);
    const auto f = iterative_filter(chain, gaussian_pulse(fast_grid()));
    CHECK(f.converged);
    CHECK(std::abs(f.last().fidelity - pair_trace().last().fidelity) < 5e-4);
    CHECK(std::abs(f.final_pulse.norm2() - 1.0) < 1e-12);
  }

  TEST_CASE("a near-perfect sorter is nearly a filter fixed point") {
    const auto& t = pair_trace();
    const Pulse next = filter_round(EmitterChain::identical(2), t.final_pulse);
    CHECK(test::phase_distance(next, t.final_pulse) < 0.05);
  }
}
