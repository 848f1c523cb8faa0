// Copyright 2026 The diractomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "diractomo/reconstruct.hpp"
#include "diractomo/serialization.hpp"

namespace diractomo {

enum class Command { FierzCheck, Roundtrip, Feasibility, Ambiguity, KernelCheck };
enum class OutputFormat { Csv, Json };

std::string_view to_string(Command command);
Command command_from_string(std::string_view name);
std::string_view to_string(OutputFormat format);
OutputFormat output_format_from_string(std::string_view name);

struct ExperimentConfig {
  Command command = Command::Roundtrip;
  RepKind representation = RepKind::Majorana;
  Protocol::Kind protocol = Protocol::Kind::DiscreteMajorana;
  std::optional<std::int64_t> shots;
  std::uint64_t seed = 42;
  int trials = 100;
  std::optional<std::pair<int, int>> grid;  // (n_theta, n_phi)
  std::optional<std::array<double, 8>> spinor;
  std::string output_path;  // empty: standard output
  OutputFormat format = OutputFormat::Csv;
  SymmetryGroup group = SymmetryGroup::Rotations;  // ambiguity
  SpinorClass spinor_class = SpinorClass::Generic;  // ambiguity
  int threads = 0;  // 0: hardware concurrency; never affects output
};

/// Throws Error(ParseError) for unknown keys, wrong types or values that
/// violate the config invariants.
ExperimentConfig config_from_json(const Json& j);
/// Canonical form; output_path and threads are omitted unless `complete`.
Json config_to_json(const ExperimentConfig& cfg, bool complete = false);
/// Throws Error(ParseError).
void validate_config(const ExperimentConfig& cfg);
/// 16 hex digits of FNV-1a over the canonical JSON.
std::string config_hash(const ExperimentConfig& cfg);

Protocol protocol_of(const ExperimentConfig& cfg);

struct RunResult {
  int exit_code = 0;  // 0 success, 3 acceptance failure
  std::string output;  // file contents
  std::string summary;  // one line for the console
};

RunResult run_fierz_check(const ExperimentConfig& cfg);
RunResult run_roundtrip(const ExperimentConfig& cfg);
RunResult run_feasibility(const ExperimentConfig& cfg);
RunResult run_ambiguity(const ExperimentConfig& cfg);
RunResult run_kernel_check(const ExperimentConfig& cfg);
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace diractomo
