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

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "psort/apps.hpp"
#include "psort/modal.hpp"
#include "psort/optimize.hpp"
#include "psort/oracle.hpp"

namespace psort::io {

using Json = nlohmann::ordered_json;

/// Fixed-precision number formatting shared by every CSV writer.
std::string fmt(double v);

/// Pulse as CSV (k,re,im or t,re,im) plus a sidecar <path>.json with the grid.
void write_pulse(const std::filesystem::path& path, const Pulse& p);
/// Reads a momentum-domain pulse written by write_pulse. The grid comes from
/// the sidecar when present, otherwise from the k column.
Pulse read_pulse(const std::filesystem::path& path);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string csv() const;
  Json json() const;
};

void write_text(const std::filesystem::path& path, const std::string& text);

Json grid_json(const Grid& g);
Json chain_json(const EmitterChain& chain);
Json report_json(const SortingReport& r);
Json ns_json(const NsGateResult& r);
Json time_reversal_json(const TimeReversalFit& f);

/// One JSON object per trace record.
std::string trace_jsonl(const OptimizationTrace& trace);

Table lorentzian_table(const LorentzianSweep& s);
Table cell_table(const std::vector<SweepCell>& cells);
Table beta_table(const std::vector<BetaRow>& rows);
Table bell_rows(const std::vector<BellRow>& rows);
Table dephasing_table(const std::vector<oracle::DephasingRow>& rows);

/// Manifest written next to every command's outputs.
Json manifest(const std::string& command, const Json& parameters);

}  // namespace psort::io
