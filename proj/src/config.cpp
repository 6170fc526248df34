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

#include "psort/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace psort {

namespace {

void only_keys(const io::Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw std::invalid_argument("unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
void read(const io::Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void RunConfig::validate() const {
  if (schema_version != kSchemaVersion) {
    throw std::invalid_argument("unsupported schema_version " + std::to_string(schema_version));
  }
  chain.validate();
  if (chain.size() == 0) throw std::invalid_argument("config needs at least one emitter");
  optimizer.flow.validate();
  if (optimizer.method != "flow" && optimizer.method != "filter") {
    throw std::invalid_argument("optimizer.method must be flow or filter");
  }
  if (optimizer.max_rounds < 1) throw std::invalid_argument("optimizer.max_rounds must be >= 1");
  static const std::set<std::string> seeds{"gaussian", "lorentzian", "exp_decay", "file"};
  if (!seeds.count(seed.type)) throw std::invalid_argument("unknown seed_pulse.type '" + seed.type + "'");
  if (seed.type == "file" && seed.path.empty()) throw std::invalid_argument("seed_pulse.path required for type file");
}

RunConfig parse_config(const io::Json& j) {
  only_keys(j, {"schema_version", "grid", "emitters", "seed_pulse", "optimizer", "output_dir", "rng_seed"}, "config");
  RunConfig c;
  try {
    if (!j.contains("schema_version")) throw std::invalid_argument("config is missing schema_version");
    c.schema_version = j.at("schema_version").get<int>();
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      only_keys(g, {"n", "k_max"}, "grid");
      int n = c.grid.n;
      double k_max = c.grid.k_max;
      read(g, "n", n);
      read(g, "k_max", k_max);
      c.grid = make_grid(n, k_max);
    }
    if (j.contains("emitters")) {
      const auto& arr = j.at("emitters");
      if (!arr.is_array()) throw std::invalid_argument("emitters must be an array");
      c.chain.emitters.clear();
      for (const auto& ej : arr) {
        only_keys(ej, {"gamma", "delta", "beta", "gamma_p"}, "emitter");
        Emitter e;
        read(ej, "gamma", e.gamma);
        read(ej, "delta", e.delta);
        read(ej, "beta", e.beta);
        read(ej, "gamma_p", e.gamma_p);
        c.chain.emitters.push_back(e);
      }
    }
    if (j.contains("seed_pulse")) {
      const auto& s = j.at("seed_pulse");
      only_keys(s, {"type", "width", "sigma", "kappa", "path"}, "seed_pulse");
      read(s, "type", c.seed.type);
      read(s, "width", c.seed.width);
      read(s, "sigma", c.seed.sigma);
      read(s, "kappa", c.seed.kappa);
      read(s, "path", c.seed.path);
    }
    if (j.contains("optimizer")) {
      const auto& o = j.at("optimizer");
      only_keys(o, {"method", "dtau", "max_iters", "tol", "objective", "max_rounds", "backtracking"}, "optimizer");
      read(o, "method", c.optimizer.method);
      read(o, "dtau", c.optimizer.flow.dtau);
      read(o, "max_iters", c.optimizer.flow.max_iters);
      read(o, "tol", c.optimizer.flow.tol);
      read(o, "max_rounds", c.optimizer.max_rounds);
      read(o, "backtracking", c.optimizer.flow.backtracking);
      if (o.contains("objective")) c.optimizer.flow.kind = objective_from_string(o.at("objective").get<std::string>());
    }
    read(j, "output_dir", c.output_dir);
    read(j, "rng_seed", c.rng_seed);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config type error: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  io::Json j;
  try {
    j = io::Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c = parse_config(j);
  if (c.seed.type == "file" && std::filesystem::path(c.seed.path).is_relative()) {
    c.seed.path = (path.parent_path() / c.seed.path).string();
  }
  return c;
}

io::Json to_json(const RunConfig& c) {
  return io::Json{{"schema_version", c.schema_version},
                  {"grid", io::grid_json(c.grid)},
                  {"emitters", io::chain_json(c.chain)},
                  {"seed_pulse",
                   {{"type", c.seed.type}, {"width", c.seed.width}, {"sigma", c.seed.sigma}, {"kappa", c.seed.kappa},
                    {"path", c.seed.path}}},
                  {"optimizer",
                   {{"method", c.optimizer.method},
                    {"dtau", c.optimizer.flow.dtau},
                    {"max_iters", c.optimizer.flow.max_iters},
                    {"tol", c.optimizer.flow.tol},
                    {"objective", to_string(c.optimizer.flow.kind)},
                    {"max_rounds", c.optimizer.max_rounds},
                    {"backtracking", c.optimizer.flow.backtracking}}},
                  {"output_dir", c.output_dir},
                  {"rng_seed", c.rng_seed}};
}

Pulse make_seed(const SeedSpec& spec, const Grid& grid) {
  if (spec.type == "gaussian") return gaussian_pulse(grid, spec.width);
  if (spec.type == "lorentzian") return lorentzian_pulse(grid, spec.sigma);
  if (spec.type == "exp_decay") return exp_decay_pulse(grid, spec.kappa);
  if (spec.type == "file") {
    const Pulse p = io::read_pulse(spec.path);
    require_same_grid(p.grid, grid);
    return normalize(p);
  }
  throw std::invalid_argument("unknown seed type '" + spec.type + "'");
}

}  // namespace psort
