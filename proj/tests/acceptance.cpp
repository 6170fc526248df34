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

// Acceptance runner: one line per criterion.
//
//   psort_acceptance [--slow] [--only N[,N...]]
//
// Exit status is 0 when every criterion passes or fails only in a listed known
// deviation (printed as "FAIL (known)"); 1 otherwise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "psort/apps.hpp"
#include "psort/modal.hpp"
#include "psort/objective.hpp"
#include "psort/optimize.hpp"
#include "psort/oracle.hpp"
#include "psort/random.hpp"
#include "psort/validate.hpp"

using namespace psort;

namespace {

struct Outcome {
  bool pass = false;
  bool known = false;  ///< failed only in a documented deviation
  std::string detail;
};

std::string f(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

/// Shared optima so later criteria reuse them.
struct Context {
  Grid grid = default_grid();
  std::optional<Pulse> pair;
  std::optional<OptimizationTrace> pair_trace;

  const Pulse& pair_optimum() {
    if (!pair) {
      pair_trace = gradient_flow(EmitterChain::identical(2), gaussian_pulse(grid));
      pair = pair_trace->final_pulse;
    }
    return *pair;
  }
};

Outcome unitarity(Context& ctx) {
  const Grid doubled = make_grid(2 * ctx.grid.n, 2 * ctx.grid.k_max);
  Outcome o;
  o.pass = true;
  std::ostringstream d;
  for (int ne : {1, 2}) {
    const auto chain = EmitterChain::identical(ne);
    const double a = unitarity_deviation(chain, ctx.grid, 50, 1000 + ne);
    const double b = unitarity_deviation(chain, doubled, 50, 1000 + ne);
    o.pass = o.pass && a <= 1e-5 && b <= 0.5 * a;
    d << "Ne=" << ne << " max|ratio-1|=" << f("%.2e", a) << " doubled=" << f("%.2e", b) << "; ";
  }
  o.detail = d.str();
  return o;
}

Outcome gradients(Context& ctx) {
  Emitter lossy;
  lossy.beta = 0.9;
  double plain = 0.0, total = 0.0, cond = 0.0;
  std::mt19937_64 rng(2000);
  FdOptions opts;
  opts.stride = 4;
  for (int i = 0; i < 5; ++i) {
    const Pulse p = RandomBumps::draw(rng).sample(ctx.grid);
    plain = std::max(plain, fd_check(EmitterChain::identical(2), p, ObjectiveKind::plain_E, opts));
    total = std::max(total, fd_check(EmitterChain::identical(2, lossy), p, ObjectiveKind::total_E_minus_N2, opts));
    cond = std::max(cond, fd_check(EmitterChain::identical(2, lossy), p, ObjectiveKind::conditional_E_over_N2, opts));
  }
  Outcome o;
  o.pass = plain < 1e-5 && total < 1e-4 && cond < 1e-4;
  o.detail = "plain " + f("%.2e", plain) + " total " + f("%.2e", total) + " conditional " + f("%.2e", cond) +
             " (5 pulses, every 4th grid point)";
  return o;
}

Outcome single_emitter(Context& ctx) {
  const auto chain = EmitterChain::identical(1);
  const auto t = gradient_flow(chain, gaussian_pulse(ctx.grid));
  ReportOptions ro;
  ro.with_takagi = true;
  const SortingReport r = sorting_report(chain, t.final_pulse, ro);
  Outcome o;
  const double a1 = r.takagi->weight(0);
  o.pass = t.converged && within(r.F, 0.9223, 0.005) && within(a1, 0.558, 0.01);
  o.detail = "F " + f("%.6f", r.F) + " |a1|^2 " + f("%.5f", a1) + " iterations " + std::to_string(t.last().iter);
  return o;
}

Outcome two_emitters(Context& ctx) {
  const Pulse& p = ctx.pair_optimum();
  ReportOptions ro;
  ro.with_takagi = true;
  const SortingReport r = sorting_report(EmitterChain::identical(2), p, ro);
  const double a1 = r.takagi->weight(0);
  Outcome o;
  o.pass = ctx.pair_trace->converged && r.F >= 0.999 && within(r.F, 0.9997, 3e-4) && a1 >= 0.985 &&
           within(a1, 0.9911, 5e-3);
  o.detail = "F " + f("%.6f", r.F) + " |a1|^2 " + f("%.5f", a1) + " iterations " +
             std::to_string(ctx.pair_trace->last().iter);
  return o;
}

Outcome lorentzian(Context&) {
  const Grid g = make_grid(2048, 20.0);
  const auto s = sweep_lorentzian(Emitter{}, geometric_range(0.05, 5.0, 81), g);
  const bool floor_ok = s.min_E >= 0.26;
  const bool coincide = s.zeros_match_maxima(1);
  std::ostringstream d;
  d << "min |c1|^2+|c2|^2 " << f("%.4f", s.min_E) << " at sigma " << f("%.3f", s.rows[s.min_index].sigma)
    << "; |c2|^2 zeros at sigma";
  for (auto i : s.c2_zeros) d << " " << f("%.3f", s.rows[i].sigma);
  d << ", |c1|^2 maxima at sigma";
  for (auto i : s.c1_maxima) d << " " << f("%.3f", s.rows[i].sigma);
  d << "; coincide within one step: " << (coincide ? "yes" : "no");
  Outcome o;
  o.pass = floor_ok && coincide;
  o.known = floor_ok && !coincide;
  o.detail = d.str();
  return o;
}

Outcome time_reversal(Context& ctx) {
  const TimeReversalFit fit = time_reversal_fit(Emitter{}, ctx.pair_optimum());
  Outcome o;
  o.pass = within(fit.t_d, 1.81, 0.05) && fit.overlap > 0.99;
  o.detail = "t_d " + f("%.4f", fit.t_d) + " overlap " + f("%.5f", fit.overlap) + " mode overlap " +
             f("%.6f", fit.mode_overlap);
  return o;
}

Outcome ns(Context& ctx) {
  const NsGateResult r = ns_gate(EmitterChain::identical(2), ctx.pair_optimum(), 4, 1.0);
  const double phi = std::abs(r.phi_NS) / kPi;
  Outcome o;
  o.pass = within(r.c1_sq, 1.8e-4, 5e-5) && within(r.c2_sq, 3.4e-5, 2e-5) && r.F_NS >= 0.9995 &&
           within(phi, 0.99994, 1e-4) && r.mismatch <= 1e-6;
  o.detail = "|c1|^2 " + f("%.3e", r.c1_sq) + " |c2|^2 " + f("%.3e", r.c2_sq) + " F_NS " + f("%.6f", r.F_NS) +
             " phi/pi " + f("%.6f", phi) + " mismatch " + f("%.1e", r.mismatch);
  return o;
}

Outcome filter(Context& ctx) {
  const auto chain = EmitterChain::identical(2);
  const double flow_F = 1.0 - error_value(chain, ctx.pair_optimum());
  const auto t = iterative_filter(chain, gaussian_pulse(ctx.grid));
  const double ff = 1.0 - error_value(chain, t.final_pulse);
  Outcome o;
  o.pass = t.converged && std::abs(ff - flow_F) <= 5e-4;
  o.detail = "filter F " + f("%.7f", ff) + " after " + std::to_string(t.last().iter) + " rounds, flow F " +
             f("%.7f", flow_F);
  return o;
}

Outcome mismatch(Context& ctx) {
  SweepOptions so;
  so.with_takagi = false;
  const Pulse& seed = ctx.pair_optimum();
  const auto spot = sweep_mismatch({0.95}, {0.0}, ctx.grid, so, true, &seed);
  const auto det = sweep_mismatch({1.0}, {-0.5, -0.2, 0.2, 0.5}, ctx.grid, so, false, nullptr);
  const double asym = std::max(std::abs(det[0].F - det[3].F), std::abs(det[1].F - det[2].F));
  Outcome o;
  o.pass = spot[0].F > 0.9999 && asym <= 2e-4;
  o.detail = "F(0.95, 0) " + f("%.6f", spot[0].F) + "; F(+-0.2) " + f("%.6f", det[2].F) + "/" + f("%.6f", det[1].F) +
             "; F(+-0.5) " + f("%.6f", det[3].F) + "/" + f("%.6f", det[0].F) + "; max asymmetry " + f("%.1e", asym);
  return o;
}

Outcome lossy(Context& ctx) {
  SweepOptions so;
  so.with_takagi = false;
  const auto cond = sweep_beta({0.95, 0.9}, ObjectiveKind::conditional_E_over_N2, ctx.pair_optimum(), so);
  const auto total = sweep_beta({0.95, 0.9}, ObjectiveKind::total_E_minus_N2, ctx.pair_optimum(), so);
  Outcome o;
  o.pass = true;
  std::ostringstream d;
  for (std::size_t i = 0; i < cond.size(); ++i) {
    const auto& c = cond[i];
    const auto& t = total[i];
    o.pass = o.pass && c.Fc_opt > 0.9997;
    for (const auto* r : {&c, &t}) o.pass = o.pass && r->Ft_opt > r->Ft_reuse && r->Fc_opt > r->Fc_reuse;
    d << "beta " << c.beta << ": reuse Ft/Fc " << f("%.5f", c.Ft_reuse) << "/" << f("%.5f", c.Fc_reuse)
      << ", conditional-opt " << f("%.5f", c.Ft_opt) << "/" << f("%.6f", c.Fc_opt) << ", total-opt "
      << f("%.5f", t.Ft_opt) << "/" << f("%.5f", t.Fc_opt) << "; ";
  }
  o.detail = d.str();
  return o;
}

Outcome oracle_check(Context& ctx) {
  const auto chain = EmitterChain::identical(2);
  const auto sys = oracle::make_cascade(chain, ctx.pair_optimum());
  const auto one = oracle::evolve(sys, 1);
  const auto two = oracle::evolve(sys, 2);
  const double F1 = one.output_populations[1];
  const double F2 = two.output_populations[0];
  // The exponential pulse and its output outlast the +-20 time window of the
  // default grid, so the comparison uses half the momentum step (+-40).
  const Grid g = make_grid(2 * ctx.grid.n, ctx.grid.k_max);
  double worst = 0.0;
  for (const Pulse& p : {gaussian_pulse(g), lorentzian_pulse(g, 0.5), exp_decay_pulse(g)}) {
    worst = std::max(worst, oracle_defect(chain, p));
  }
  Outcome o;
  o.pass = within(F1, 1.0, 1e-3) && within(F2, 0.9997, 2e-3) && worst <= 1e-3;
  o.detail = "F1 " + f("%.6f", F1) + " F2 " + f("%.6f", F2) + " max occupation difference on 3 pulses (n " + std::to_string(g.n) + ") " +
             f("%.1e", worst);
  return o;
}

Outcome dephasing(Context& ctx) {
  const auto sys = oracle::make_cascade(EmitterChain::identical(2), ctx.pair_optimum());
  const auto rows = oracle::dephasing_sweep(sys, {0.0, 0.01, 0.05, 0.1});
  Outcome o;
  o.pass = true;
  std::ostringstream d;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) o.pass = o.pass && rows[i].F1 < rows[i - 1].F1 && rows[i].F2 < rows[i - 1].F2 && rows[i].F1 < rows[i].F2;
    d << "gamma_p " << rows[i].gamma_p << ": F1 " << f("%.5f", rows[i].F1) << " F2 " << f("%.5f", rows[i].F2) << "; ";
  }
  o.detail = d.str();
  return o;
}

Outcome emitter_sweep(Context& ctx) {
  SweepOptions so;
  so.with_takagi = false;
  const auto cells = sweep_emitters({1, 2, 3, 4, 5}, Emitter{}, ctx.grid, so);
  auto F = [&](int ne) { return cells[static_cast<std::size_t>(ne - 1)].F; };
  Outcome o;
  o.pass = F(2) > 0.999 && F(4) > 0.999 && F(4) <= F(2) + 1e-6 && F(3) > F(1) && F(5) > F(3);
  std::ostringstream d;
  for (const auto& c : cells) d << "Ne=" << c.emitters << " F " << f("%.6f", c.F) << "; ";
  o.detail = d.str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  bool slow = false;
  std::vector<int> only;
  app.add_flag("--slow", slow, "include the multi-emitter sweep (criterion 13)");
  app.add_option("--only", only, "run only these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome(Context&)> run;
  };
  const std::vector<Criterion> all{
      {1, "unitarity", unitarity},
      {2, "gradient correctness", gradients},
      {3, "single-emitter optimum", single_emitter},
      {4, "two-emitter optimum", two_emitters},
      {5, "lorentzian sweep", lorentzian},
      {6, "self-time-reversal", time_reversal},
      {7, "NS gate", ns},
      {8, "iterative filter", filter},
      {9, "mismatch spot checks", mismatch},
      {10, "lossy sorting", lossy},
      {11, "oracle cross-check", oracle_check},
      {12, "dephasing behavior", dephasing},
      {13, "emitter-number sweep", emitter_sweep},
  };
  const std::set<int> selected(only.begin(), only.end());

  Context ctx;
  bool ok = true;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    if (c.id == 13 && !slow && !selected.count(13)) {
      std::printf("criterion %2d %-24s SKIP (slow; pass --slow)\n", c.id, c.name);
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* status = o.pass ? "PASS" : (o.known ? "FAIL (known)" : "FAIL");
    std::printf("criterion %2d %-24s %-12s %s [%.1f s]\n", c.id, c.name, status, o.detail.c_str(), sec);
    std::fflush(stdout);
    if (!o.pass && !o.known) ok = false;
  }
  return ok ? 0 : 1;
}
