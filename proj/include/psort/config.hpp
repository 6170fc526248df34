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

#include <cstdint>
#include <filesystem>
#include <string>

#include "psort/io.hpp"
#include "psort/objective.hpp"
#include "psort/optimize.hpp"
#include "psort/scattering.hpp"

namespace psort {

inline constexpr int kSchemaVersion = 1;

struct SeedSpec {
  std::string type = "gaussian";  ///< gaussian | lorentzian | exp_decay | file
  double width = 2.0;             ///< gaussian exponent
  double sigma = 1.0;             ///< lorentzian width
  double kappa = 1.0;             ///< exp_decay rate
  std::string path;               ///< pulse CSV for type = file
};

struct OptimizerSpec {
  std::string method = "flow";  ///< flow | filter
  FlowParams flow;
  int max_rounds = 50;
};

/// JSON run configuration. Example:
///   {"schema_version": 1, "grid": {"n": 512, "k_max": 40},
///    "emitters": [{"gamma": 1}, {"gamma": 1}],
///    "seed_pulse": {"type": "gaussian", "width": 2},
///    "optimizer": {"method": "flow", "dtau": 0.05, "max_iters": 20000,
///                  "tol": 1e-10, "objective": "plain_E"},
///    "output_dir": "out", "rng_seed": 7}
struct RunConfig {
  int schema_version = kSchemaVersion;
  Grid grid = default_grid();
  EmitterChain chain = EmitterChain::identical(2);
  SeedSpec seed;
  OptimizerSpec optimizer;
  std::string output_dir = "psort_out";
  std::uint64_t rng_seed = 7;

  void validate() const;
};

/// Missing keys keep their defaults; unknown keys and wrong types are errors.
RunConfig parse_config(const io::Json& j);
RunConfig load_config(const std::filesystem::path& path);
io::Json to_json(const RunConfig& c);

Pulse make_seed(const SeedSpec& spec, const Grid& grid);

}  // namespace psort
