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

#include "psort/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace psort::io {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

Json grid_json(const Grid& g) { return Json{{"n", g.n}, {"k_max", g.k_max}}; }

void write_pulse(const std::filesystem::path& path, const Pulse& p) {
  const bool momentum = p.domain == Domain::momentum;
  std::string body = momentum ? "k,re,im\n" : "t,re,im\n";
  for (int j = 0; j < p.grid.n; ++j) {
    const double x = momentum ? p.grid.k(j) : p.grid.t(j);
    body += fmt(x) + "," + fmt(p.amp[j].real()) + "," + fmt(p.amp[j].imag()) + "\n";
  }
  write_text(path, body);
  Json side{{"grid", grid_json(p.grid)}, {"domain", momentum ? "momentum" : "time"}, {"norm", p.norm()}};
  write_text(path.string() + ".json", side.dump(2) + "\n");
}

Pulse read_pulse(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read pulse " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("k,", 0) != 0) throw std::runtime_error("pulse file must be momentum domain with a k,re,im header");
  std::vector<double> ks;
  std::vector<cplx> amp;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, c, ',');
    ks.push_back(std::stod(a));
    amp.emplace_back(std::stod(b), std::stod(c));
  }
  if (ks.size() < 2) throw std::runtime_error("pulse file has too few rows");
  Grid g;
  std::ifstream side(path.string() + ".json");
  if (side) {
    const Json j = Json::parse(side);
    g = make_grid(j.at("grid").at("n").get<int>(), j.at("grid").at("k_max").get<double>());
  } else {
    g = make_grid(static_cast<int>(ks.size()), -ks.front());
  }
  if (g.n != static_cast<int>(amp.size())) throw std::runtime_error("pulse file row count does not match its grid");
  Pulse p = zero_pulse(g);
  for (int j = 0; j < g.n; ++j) p.amp[j] = amp[j];
  return p;
}

void Table::add(std::vector<std::string> row) {
  if (row.size() != header.size()) throw std::logic_error("table row width mismatch");
  rows.push_back(std::move(row));
}

std::string Table::csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ",";
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") == std::string::npos) {
        out += c;
        continue;
      }
      out += '"';
      for (char ch : c) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    }
    out += "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

Json Table::json() const {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < header.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(r[i].c_str(), &end);
      if (end != r[i].c_str() && *end == '\0') {
        obj[header[i]] = v;
      } else {
        obj[header[i]] = r[i];
      }
    }
    arr.push_back(std::move(obj));
  }
  return arr;
}

Json chain_json(const EmitterChain& chain) {
  Json arr = Json::array();
  for (const auto& e : chain.emitters) {
    arr.push_back(Json{{"gamma", e.gamma}, {"delta", e.delta}, {"beta", e.beta}, {"gamma_p", e.gamma_p}});
  }
  return arr;
}

Json report_json(const SortingReport& r) {
  Json j{{"N1", r.N1},
         {"N2", r.N2},
         {"c1_sq", r.c1 * r.c1},
         {"c2_sq", std::norm(r.c2)},
         {"c2_re", r.c2.real()},
         {"c2_im", r.c2.imag()},
         {"E", r.E},
         {"F", r.F},
         {"Ft", r.Ft},
         {"Fc", r.Fc}};
  if (r.takagi) {
    Json w = Json::array();
    for (std::size_t n = 0; n < std::min<std::size_t>(8, r.takagi->eigenvalues.size()); ++n) w.push_back(r.takagi->weight(n));
    j["takagi_weights"] = std::move(w);
  }
  return j;
}

Json ns_json(const NsGateResult& r) {
  return Json{{"F_NS", r.F_NS},
              {"phi_NS", r.phi_NS},
              {"phi_NS_over_pi", r.phi_NS / kPi},
              {"c1_sq", r.c1_sq},
              {"c2_sq", r.c2_sq},
              {"direct_re", r.direct.real()},
              {"direct_im", r.direct.imag()},
              {"closed_re", r.closed_form.real()},
              {"closed_im", r.closed_form.imag()},
              {"mismatch", r.mismatch},
              {"N2", r.N2},
              {"window_factor", r.window_factor}};
}

Json time_reversal_json(const TimeReversalFit& f) {
  return Json{{"t_d", f.t_d},
              {"overlap", f.overlap},
              {"second_scatter_overlap", f.second_scatter_overlap},
              {"mode_overlap", f.mode_overlap}};
}

std::string trace_jsonl(const OptimizationTrace& trace) {
  std::string out;
  for (const auto& r : trace.iterations) {
    Json j{{"iter", r.iter}, {"objective", r.objective}, {"fidelity", r.fidelity},
           {"E", r.E},       {"N2", r.N2},               {"dtau", r.dtau}};
    out += j.dump() + "\n";
  }
  return out;
}

Table lorentzian_table(const LorentzianSweep& s) {
  Table t{{"sigma", "c1_sq", "c2_sq", "E", "c2_zero", "c1_max"}, {}};
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    const auto& r = s.rows[i];
    const bool z = std::find(s.c2_zeros.begin(), s.c2_zeros.end(), i) != s.c2_zeros.end();
    const bool m = std::find(s.c1_maxima.begin(), s.c1_maxima.end(), i) != s.c1_maxima.end();
    t.add({fmt(r.sigma), fmt(r.c1_sq), fmt(r.c2_sq), fmt(r.E()), z ? "1" : "0", m ? "1" : "0"});
  }
  return t;
}

Table cell_table(const std::vector<SweepCell>& cells) {
  Table t{{"emitters", "gamma_ratio", "detuning", "beta", "F", "a1_sq", "spread", "iterations", "converged"}, {}};
  for (const auto& c : cells) {
    t.add({std::to_string(c.emitters), fmt(c.gamma_ratio), fmt(c.detuning), fmt(c.beta), fmt(c.F), fmt(c.a1_sq),
           fmt(c.spread), std::to_string(c.iterations), c.converged ? "1" : "0"});
  }
  return t;
}

Table beta_table(const std::vector<BetaRow>& rows) {
  Table t{{"beta", "Ft_reuse", "Fc_reuse", "Ft_opt", "Fc_opt", "iterations", "converged"}, {}};
  for (const auto& r : rows) {
    t.add({fmt(r.beta), fmt(r.Ft_reuse), fmt(r.Fc_reuse), fmt(r.Ft_opt), fmt(r.Fc_opt), std::to_string(r.iterations),
           r.converged ? "1" : "0"});
  }
  return t;
}

Table bell_rows(const std::vector<BellRow>& rows) {
  Table t{{"input", "successful_clicks", "probability"}, {}};
  for (const auto& r : rows) t.add({r.input, format_clicks(r), fmt(r.probability)});
  return t;
}

Table dephasing_table(const std::vector<oracle::DephasingRow>& rows) {
  Table t{{"gamma_p", "F1", "F2"}, {}};
  for (const auto& r : rows) t.add({fmt(r.gamma_p), fmt(r.F1), fmt(r.F2)});
  return t;
}

Json manifest(const std::string& command, const Json& parameters) {
  return Json{{"tool", "psort"}, {"version", "1.0.0"}, {"command", command}, {"parameters", parameters}};
}

}  // namespace psort::io
