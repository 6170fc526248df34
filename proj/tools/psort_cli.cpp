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
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "psort/apps.hpp"
#include "psort/config.hpp"
#include "psort/io.hpp"
#include "psort/modal.hpp"
#include "psort/optimize.hpp"
#include "psort/oracle.hpp"
#include "psort/validate.hpp"

namespace fs = std::filesystem;
using namespace psort;
using io::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;

/// Raised for results that are computed but unacceptable (non-finite values,
/// failed checks); maps to exit code 2.
struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  std::string output = "json";
  std::string out_dir;
  std::string pulse;
  bool fast = false;
  std::optional<int> grid_n;
  std::optional<double> k_max;
  std::optional<int> emitters;
  std::optional<double> beta;
  std::optional<std::string> method;
  std::optional<std::string> objective;
  std::optional<double> dtau;
  std::optional<int> max_iters;
  std::optional<double> tol;
  std::optional<std::string> seed;
  std::optional<std::uint64_t> rng_seed;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--output", c.output, "stdout format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out-dir", c.out_dir, "output directory (overrides output_dir)");
  cmd->add_option("--pulse", c.pulse, "input pulse CSV instead of optimizing")->check(CLI::ExistingFile);
  cmd->add_flag("--fast", c.fast, "use the fast grid n=128, k_max=8");
  cmd->add_option("--grid-n", c.grid_n, "grid points");
  cmd->add_option("--k-max", c.k_max, "momentum window half-width");
  cmd->add_option("--emitters", c.emitters, "number of identical emitters");
  cmd->add_option("--beta", c.beta, "directional efficiency of every emitter");
  cmd->add_option("--method", c.method, "flow | filter")->check(CLI::IsMember({"flow", "filter"}));
  cmd->add_option("--objective", c.objective, "plain_E | total | conditional");
  cmd->add_option("--dtau", c.dtau, "gradient-flow step");
  cmd->add_option("--max-iters", c.max_iters, "gradient-flow iteration cap");
  cmd->add_option("--tol", c.tol, "convergence tolerance");
  cmd->add_option("--seed-pulse", c.seed, "gaussian | lorentzian | exp_decay");
  cmd->add_option("--rng-seed", c.rng_seed, "seed for randomized checks");
}

RunConfig resolve(const Common& c) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
  if (c.fast) cfg.grid = fast_grid();
  if (c.grid_n || c.k_max) cfg.grid = make_grid(c.grid_n.value_or(cfg.grid.n), c.k_max.value_or(cfg.grid.k_max));
  if (c.emitters) {
    if (*c.emitters < 1) throw std::invalid_argument("--emitters must be >= 1");
    const Emitter e = cfg.chain.emitters.front();
    cfg.chain = EmitterChain::identical(*c.emitters, e);
  }
  if (c.beta) {
    for (auto& e : cfg.chain.emitters) e.beta = *c.beta;
  }
  if (c.method) cfg.optimizer.method = *c.method;
  if (c.objective) cfg.optimizer.flow.kind = objective_from_string(*c.objective);
  if (c.dtau) cfg.optimizer.flow.dtau = *c.dtau;
  if (c.max_iters) cfg.optimizer.flow.max_iters = *c.max_iters;
  if (c.tol) cfg.optimizer.flow.tol = *c.tol;
  if (c.seed) cfg.seed.type = *c.seed;
  if (c.rng_seed) cfg.rng_seed = *c.rng_seed;
  if (!c.out_dir.empty()) cfg.output_dir = c.out_dir;
  cfg.validate();
  return cfg;
}

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw ValidationFailure("non-finite " + what);
}

/// Collects a command's outputs and writes them to disk and stdout.
class Run {
 public:
  Run(std::string command, const Common& c, RunConfig cfg)
      : command_(std::move(command)), format_(c.output), cfg_(std::move(cfg)), dir_(cfg_.output_dir) {
    params_ = Json::object();
    if (!c.pulse.empty()) params_["input_pulse"] = fs::absolute(c.pulse).string();
  }

  const RunConfig& config() const { return cfg_; }
  const fs::path& dir() const { return dir_; }
  Json& params() { return params_; }

  void pulse(const std::string& stem, const Pulse& p) {
    io::write_pulse(dir_ / (stem + "_k.csv"), p);
    io::write_pulse(dir_ / (stem + "_t.csv"), to_time_domain(p));
  }

  void extra(const std::string& name, const std::string& text) { io::write_text(dir_ / name, text); }

  int finish(const Json& result, const std::optional<io::Table>& table = std::nullopt) {
    io::write_text(dir_ / "manifest.json", io::manifest(command_, Json{{"config", to_json(cfg_)}, {"options", params_}}).dump(2) + "\n");
    io::write_text(dir_ / "result.json", result.dump(2) + "\n");
    if (table) io::write_text(dir_ / "result.csv", table->csv());
    if (format_ == "csv" && table) {
      std::cout << table->csv();
    } else {
      std::cout << result.dump(2) << "\n";
    }
    return kExitOk;
  }

 private:
  std::string command_;
  std::string format_;
  RunConfig cfg_;
  fs::path dir_;
  Json params_;
};

Pulse optimize_config(const RunConfig& cfg, OptimizationTrace* trace_out = nullptr) {
  const Pulse seed = make_seed(cfg.seed, cfg.grid);
  OptimizationTrace trace;
  if (cfg.optimizer.method == "filter") {
    FilterParams fp;
    fp.max_rounds = cfg.optimizer.max_rounds;
    fp.tol = cfg.optimizer.flow.tol;
    trace = iterative_filter(cfg.chain, seed, fp);
  } else {
    trace = gradient_flow(cfg.chain, seed, cfg.optimizer.flow);
  }
  require_finite(trace.last().objective, "objective");
  Pulse p = trace.final_pulse;
  if (trace_out) *trace_out = std::move(trace);
  return p;
}

/// --pulse when given, otherwise the optimum for the configured chain.
Pulse input_pulse(const Common& c, const RunConfig& cfg) {
  if (!c.pulse.empty()) return normalize(io::read_pulse(c.pulse));
  return optimize_config(cfg);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad list entry '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list '" + text + "'");
  return out;
}

Json list_json(const std::vector<double>& v) { return Json(v); }

void set_threads_from_env() {
  const char* env = std::getenv("PSORT_THREADS");
  if (!env || !*env) return;
  const int n = std::atoi(env);
  if (n < 1) throw std::invalid_argument("PSORT_THREADS must be a positive integer");
#ifdef _OPENMP
  omp_set_num_threads(n);
#endif
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon sorting with chirally coupled emitters"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "psort 1.0.0");

  Common common;
  std::vector<CLI::App*> subs;
  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, common);
    subs.push_back(s);
    return s;
  };

  sub("optimize", "optimize the input pulse for the configured chain");
  sub("report", "sorting report for --pulse or the configured seed pulse");

  auto* lor = sub("sweep-lorentzian", "modal populations of a scattered Lorentzian pulse versus width");
  double sigma_min = 0.05, sigma_max = 5.0, sweep_k_max = 20.0;
  int sigma_count = 81, sweep_n = 2048;
  lor->add_option("--sigma-min", sigma_min);
  lor->add_option("--sigma-max", sigma_max);
  lor->add_option("--count", sigma_count);
  lor->add_option("--sweep-grid-n", sweep_n, "grid points of the sweep grid");
  lor->add_option("--sweep-k-max", sweep_k_max, "window of the sweep grid");

  auto* ems = sub("sweep-emitters", "optimal fidelity versus number of identical emitters");
  std::string counts_text = "1,2,3,4";
  ems->add_option("--counts", counts_text, "comma-separated emitter counts");

  auto* mis = sub("sweep-mismatch", "optimal fidelity of a pair versus rate ratio and detuning");
  std::string ratios_text = "1", detunings_text = "0";
  bool cold = false;
  mis->add_option("--ratios", ratios_text, "comma-separated gamma2/gamma1");
  mis->add_option("--detunings", detunings_text, "comma-separated detunings of emitter 2");
  mis->add_flag("--cold", cold, "seed every cell from the standard seeds");

  auto* bet = sub("sweep-beta", "lossy sorting versus directional efficiency");
  std::string betas_text = "1,0.95,0.9";
  std::string reference;
  bet->add_option("--betas", betas_text, "comma-separated beta values");
  bet->add_option("--reference", reference, "lossless optimum CSV (default: optimize first)")
      ->check(CLI::ExistingFile);

  auto* ns = sub("ns-gate", "nonlinear-sign gate from the sorted output");
  int window_factor = 4;
  double ns_tol = 1e-6;
  ns->add_option("--window-factor", window_factor, "momentum window widening at fixed dk");
  ns->add_option("--tolerance", ns_tol, "allowed pipeline vs closed-form mismatch");

  auto* bell = sub("bell-table", "Bell-state analyzer click table");
  std::optional<double> fidelity;
  bell->add_option("--fidelity", fidelity, "sorting fidelity (default: computed)");

  auto* tr = sub("time-reversal", "fit the self-time-reversal delay of the two-photon output");
  TimeReversalOptions tr_opts;
  tr->add_option("--t-min", tr_opts.t_min);
  tr->add_option("--t-max", tr_opts.t_max);
  tr->add_option("--scan-step", tr_opts.scan_step);

  auto* dep = sub("dephasing", "cascade master-equation fidelities versus pure dephasing");
  std::string gammas_text = "0,0.01,0.05,0.1";
  double oracle_dt = 1e-3, ring_down = 12.0;
  dep->add_option("--gamma-p", gammas_text, "comma-separated dephasing rates");
  dep->add_option("--dt", oracle_dt, "RK4 step");
  dep->add_option("--ring-down", ring_down, "ring-down time in units of 1/Gamma_tot");

  auto* val = sub("validate", "unitarity, gradient and oracle cross-check suite");
  (void)val;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* cmd = nullptr;
  for (auto* s : subs) {
    if (s->parsed()) cmd = s;
  }
  const std::string name = cmd->get_name();

  try {
    set_threads_from_env();
    Run run(name, common, resolve(common));
    const RunConfig& cfg = run.config();

    if (name == "optimize") {
      OptimizationTrace trace;
      const Pulse p = optimize_config(cfg, &trace);
      ReportOptions ro;
      ro.with_takagi = true;
      const SortingReport rep = sorting_report(cfg.chain, p, ro);
      require_finite(rep.E, "sorting error");
      run.pulse("optimum", p);
      run.pulse("output_mode", normalize(rep.psi_out));
      run.extra("trace.jsonl", io::trace_jsonl(trace));
      Json res = io::report_json(rep);
      res["iterations"] = trace.last().iter;
      res["converged"] = trace.converged;
      io::Table t;
      t.header = {"N1", "N2", "c1_sq", "c2_sq", "E", "F", "Ft", "Fc", "a1_sq", "iterations", "converged"};
      t.add({io::fmt(rep.N1), io::fmt(rep.N2), io::fmt(rep.c1 * rep.c1), io::fmt(std::norm(rep.c2)), io::fmt(rep.E),
             io::fmt(rep.F), io::fmt(rep.Ft), io::fmt(rep.Fc), io::fmt(rep.takagi->weight(0)),
             std::to_string(trace.last().iter), trace.converged ? "1" : "0"});
      return run.finish(res, t);
    }

    if (name == "report") {
      const Pulse p = common.pulse.empty() ? make_seed(cfg.seed, cfg.grid) : normalize(io::read_pulse(common.pulse));
      ReportOptions ro;
      ro.with_takagi = true;
      const SortingReport rep = sorting_report(cfg.chain, p, ro);
      require_finite(rep.E, "sorting error");
      run.pulse("output_mode", normalize(rep.psi_out));
      io::Table t;
      t.header = {"N1", "N2", "c1_sq", "c2_sq", "E", "F", "Ft", "Fc", "a1_sq"};
      t.add({io::fmt(rep.N1), io::fmt(rep.N2), io::fmt(rep.c1 * rep.c1), io::fmt(std::norm(rep.c2)), io::fmt(rep.E),
             io::fmt(rep.F), io::fmt(rep.Ft), io::fmt(rep.Fc), io::fmt(rep.takagi->weight(0))});
      return run.finish(io::report_json(rep), t);
    }

    if (name == "sweep-lorentzian") {
      const Grid g = make_grid(sweep_n, sweep_k_max);
      const auto sigmas = geometric_range(sigma_min, sigma_max, sigma_count);
      const LorentzianSweep s = sweep_lorentzian(cfg.chain.emitters.front(), sigmas, g);
      for (const auto& r : s.rows) require_finite(r.E(), "Lorentzian populations");
      run.params()["sweep_grid"] = io::grid_json(g);
      run.params()["sigmas"] = list_json(sigmas);
      const io::Table t = io::lorentzian_table(s);
      Json res{{"min_sigma", s.rows[s.min_index].sigma},
               {"min_E", s.min_E},
               {"zeros_match_maxima", s.zeros_match_maxima()},
               {"rows", t.json()}};
      return run.finish(res, t);
    }

    if (name == "sweep-emitters") {
      std::vector<int> counts;
      for (double v : parse_list(counts_text)) counts.push_back(static_cast<int>(v));
      SweepOptions so;
      so.flow = cfg.optimizer.flow;
      const auto cells = sweep_emitters(counts, cfg.chain.emitters.front(), cfg.grid, so);
      for (const auto& c : cells) {
        require_finite(c.F, "fidelity");
        run.pulse("optimum_ne" + std::to_string(c.emitters), c.optimum);
      }
      const io::Table t = io::cell_table(cells);
      return run.finish(Json{{"cells", t.json()}}, t);
    }

    if (name == "sweep-mismatch") {
      SweepOptions so;
      so.flow = cfg.optimizer.flow;
      const auto ratios = parse_list(ratios_text);
      const auto deltas = parse_list(detunings_text);
      std::optional<Pulse> first;
      if (!common.pulse.empty()) first = normalize(io::read_pulse(common.pulse));
      const auto cells = sweep_mismatch(ratios, deltas, cfg.grid, so, !cold, first ? &*first : nullptr);
      for (std::size_t i = 0; i < cells.size(); ++i) {
        require_finite(cells[i].F, "fidelity");
        run.pulse("optimum_" + std::to_string(i), cells[i].optimum);
      }
      run.params()["ratios"] = list_json(ratios);
      run.params()["detunings"] = list_json(deltas);
      run.params()["warm_start"] = !cold;
      const io::Table t = io::cell_table(cells);
      return run.finish(Json{{"cells", t.json()}}, t);
    }

    if (name == "sweep-beta") {
      SweepOptions so;
      so.flow = cfg.optimizer.flow;
      Pulse ref;
      if (!reference.empty()) {
        ref = normalize(io::read_pulse(reference));
        run.params()["reference"] = fs::absolute(reference).string();
      } else {
        RunConfig lossless = cfg;
        lossless.chain = EmitterChain::identical(2);
        lossless.optimizer.flow.kind = ObjectiveKind::plain_E;
        ref = optimize_config(lossless);
      }
      const auto betas = parse_list(betas_text);
      run.params()["betas"] = list_json(betas);
      const auto rows = sweep_beta(betas, cfg.optimizer.flow.kind, ref, so);
      run.pulse("reference", ref);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        require_finite(rows[i].Fc_opt, "fidelity");
        run.pulse("optimum_" + std::to_string(i), rows[i].optimum);
      }
      const io::Table t = io::beta_table(rows);
      return run.finish(Json{{"objective", to_string(cfg.optimizer.flow.kind)}, {"rows", t.json()}}, t);
    }

    if (name == "ns-gate") {
      const Pulse p = input_pulse(common, cfg);
      run.params()["window_factor"] = window_factor;
      run.params()["tolerance"] = ns_tol;
      NsGateResult r;
      try {
        r = ns_gate(cfg.chain, p, window_factor, ns_tol);
      } catch (const std::runtime_error& e) {
        throw ValidationFailure(e.what());
      }
      require_finite(r.F_NS, "F_NS");
      run.pulse("input", p);
      io::Table t;
      t.header = {"F_NS", "phi_NS_over_pi", "c1_sq", "c2_sq", "mismatch", "N2"};
      t.add({io::fmt(r.F_NS), io::fmt(r.phi_NS / kPi), io::fmt(r.c1_sq), io::fmt(r.c2_sq), io::fmt(r.mismatch),
             io::fmt(r.N2)});
      return run.finish(io::ns_json(r), t);
    }

    if (name == "bell-table") {
      double F = 0.0;
      if (fidelity) {
        F = *fidelity;
      } else {
        F = 1.0 - error_value(cfg.chain, input_pulse(common, cfg));
      }
      if (!(F >= 0.0 && F <= 1.0)) throw std::invalid_argument("fidelity must lie in [0, 1]");
      run.params()["fidelity"] = F;
      const auto rows = bell_table(F);
      const io::Table t = io::bell_rows(rows);
      return run.finish(Json{{"fidelity", F}, {"rows", t.json()}}, t);
    }

    if (name == "time-reversal") {
      const Pulse p = input_pulse(common, cfg);
      run.params()["t_min"] = tr_opts.t_min;
      run.params()["t_max"] = tr_opts.t_max;
      run.params()["scan_step"] = tr_opts.scan_step;
      const TimeReversalFit f = time_reversal_fit(cfg.chain.emitters.front(), p, tr_opts);
      require_finite(f.overlap, "overlap");
      io::Table t;
      t.header = {"t_d", "overlap", "second_scatter_overlap", "mode_overlap"};
      t.add({io::fmt(f.t_d), io::fmt(f.overlap), io::fmt(f.second_scatter_overlap), io::fmt(f.mode_overlap)});
      return run.finish(io::time_reversal_json(f), t);
    }

    if (name == "dephasing") {
      const Pulse p = input_pulse(common, cfg);
      const auto gammas = parse_list(gammas_text);
      run.params()["gamma_p"] = list_json(gammas);
      run.params()["dt"] = oracle_dt;
      run.params()["ring_down"] = ring_down;
      const auto sys = oracle::make_cascade(cfg.chain, p, ring_down, oracle_dt);
      const auto rows = oracle::dephasing_sweep(sys, gammas);
      for (const auto& r : rows) {
        require_finite(r.F1, "F1");
        require_finite(r.F2, "F2");
      }
      run.pulse("input", p);
      const io::Table t = io::dephasing_table(rows);
      return run.finish(Json{{"rows", t.json()}}, t);
    }

    if (name == "validate") {
      ValidationOptions vo;
      vo.fast = common.fast;
      vo.seed = cfg.rng_seed;
      const auto checks = validation_suite(vo);
      io::Table t;
      t.header = {"check", "value", "tolerance", "pass"};
      bool all = true;
      for (const auto& c : checks) {
        t.add({c.name, io::fmt(c.value), io::fmt(c.tolerance), c.pass ? "1" : "0"});
        all = all && c.pass;
      }
      run.params()["fast"] = common.fast;
      run.finish(Json{{"pass", all}, {"checks", t.json()}}, t);
      return all ? kExitOk : kExitValidation;
    }
  } catch (const ValidationFailure& e) {
    std::cerr << "psort " << name << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "psort " << name << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "psort " << name << ": " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
