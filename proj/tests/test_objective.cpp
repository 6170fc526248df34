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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "psort/modal.hpp"
#include "psort/objective.hpp"
#include "psort/random.hpp"

using namespace psort;

namespace {

EmitterChain lossy_pair(double beta) {
  Emitter e;
  e.beta = beta;
  return EmitterChain::identical(2, e);
}

}  // namespace

TEST_SUITE("objective") {
  TEST_CASE("objective names") {
    for (auto k : {ObjectiveKind::plain_E, ObjectiveKind::total_E_minus_N2, ObjectiveKind::conditional_E_over_N2}) {
      CHECK(objective_from_string(to_string(k)) == k);
    }
    CHECK(objective_from_string("total") == ObjectiveKind::total_E_minus_N2);
    CHECK(objective_from_string("conditional") == ObjectiveKind::conditional_E_over_N2);
    CHECK_THROWS(objective_from_string("nope"));
  }

  TEST_CASE("finite differences are exact on a quadratic") {
    const Grid g = fast_grid();
    std::mt19937_64 rng(30);
    const Pulse p = RandomBumps::draw(rng).sample(g);
    CVector d(g.n);
    for (int j = 0; j < g.n; ++j) d[j] = 1.0 + 0.5 * std::sin(0.3 * j);
    auto f = [&](const Pulse& q) { return (d.cwiseProduct(q.amp.cwiseAbs2().cast<cplx>())).real().sum() * g.dk; };
    Pulse grad = p;
    grad.amp = d.cwiseProduct(p.amp);
    CHECK(fd_check(f, grad, p) < 1e-9);
  }

  TEST_CASE("analytic gradients match finite differences") {
    const Grid g = fast_grid();
    std::mt19937_64 rng(31);
    const Pulse p = RandomBumps::draw(rng).sample(g);
    CHECK(fd_check(EmitterChain::identical(1), p, ObjectiveKind::plain_E) < 1e-5);
    CHECK(fd_check(EmitterChain::identical(2), p, ObjectiveKind::plain_E) < 1e-5);
    CHECK(fd_check(lossy_pair(0.9), p, ObjectiveKind::conditional_E_over_N2) < 1e-4);
    CHECK(fd_check(lossy_pair(0.9), p, ObjectiveKind::total_E_minus_N2) < 1e-4);
    Emitter det;
    det.delta = 0.3;
    det.gamma = 0.8;
    CHECK(fd_check(EmitterChain{{Emitter{}, det}}, p, ObjectiveKind::plain_E) < 1e-5);
  }

  TEST_CASE("gauge invariance and covariance") {
    const Grid g = fast_grid();
    std::mt19937_64 rng(32);
    const Pulse p = RandomBumps::draw(rng).sample(g);
    Pulse q = p;
    const cplx ph = std::exp(kI * 0.77);
    q.amp *= ph;
    for (auto kind : {ObjectiveKind::plain_E, ObjectiveKind::conditional_E_over_N2}) {
      const auto chain = kind == ObjectiveKind::plain_E ? EmitterChain::identical(2) : lossy_pair(0.9);
      const GradientResult a = gradient(chain, p, kind);
      const GradientResult b = gradient(chain, q, kind);
      CHECK(std::abs(a.value - b.value) < 1e-12);
      CHECK(test::max_abs(b.grad.amp - ph * a.grad.amp) < 1e-10);
    }
  }

  TEST_CASE("error is invariant under conjugate reflection") {
    // Exact up to window truncation, which shrinks as the window grows.
    auto worst = [](const Grid& g) {
      std::mt19937_64 rng(41);
      double d = 0.0;
      for (int trial = 0; trial < 5; ++trial) {
        const Pulse p = RandomBumps::draw(rng).sample(g);
        for (int ne = 1; ne <= 2; ++ne) {
          const auto chain = EmitterChain::identical(ne);
          d = std::max(d, std::abs(error_value(chain, p) - error_value(chain, conj_reflect(p))));
        }
      }
      return d;
    };
    const double coarse = worst(fast_grid());
    const double fine = worst(default_grid());
    CHECK(fine < 1e-7);
    CHECK(fine < 0.01 * coarse);
  }

  TEST_CASE("error kernel is Hermitian and reproduces E") {
    const Grid g = fast_grid();
    std::mt19937_64 rng(33);
    const Pulse phi = RandomBumps::draw(rng).sample(g);
    const Pulse a = RandomBumps::draw(rng).sample(g);
    const Pulse b = RandomBumps::draw(rng).sample(g);
    const auto chain = EmitterChain::identical(2);
    const cplx lhs = inner(a, apply_error_kernel(chain, phi, b));
    const cplx rhs = inner(apply_error_kernel(chain, phi, a), b);
    CHECK(std::abs(lhs - rhs) < 1e-8);
    CHECK(std::abs(inner(phi, apply_error_kernel(chain, phi, phi)) - error_value(chain, phi)) < 1e-10);
  }

  TEST_CASE("contraction E equals modal populations") {
    const Grid g = fast_grid();
    std::mt19937_64 rng(34);
    for (const auto& chain : {EmitterChain::identical(1), EmitterChain::identical(3), lossy_pair(0.85)}) {
      const Pulse p = RandomBumps::draw(rng).sample(g);
      const SortingReport r = sorting_report(chain, p);
      CHECK(std::abs(error_value(chain, p) - (r.c1 * r.c1 + std::norm(r.c2))) < 1e-10);
    }
  }

  TEST_CASE("objective variants") {
    const Grid g = fast_grid();
    const Pulse p = gaussian_pulse(g);
    const auto chain = lossy_pair(0.9);
    const auto plain = objective_terms(chain, p, ObjectiveKind::plain_E);
    const auto total = objective_terms(chain, p, ObjectiveKind::total_E_minus_N2);
    const auto cond = objective_terms(chain, p, ObjectiveKind::conditional_E_over_N2);
    CHECK(plain.value == doctest::Approx(plain.E));
    CHECK(total.value == doctest::Approx(plain.E - plain.N2));
    CHECK(cond.value == doctest::Approx(plain.E / plain.N2));
    CHECK(plain.N1 < 1.0);
    CHECK(plain.N2 < 1.0);
  }

  TEST_CASE("identity chain has E = 1") {
    CHECK(std::abs(error_value(EmitterChain{}, gaussian_pulse(fast_grid())) - 1.0) < 1e-12);
  }
}
