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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "diractomo/error.hpp"
#include "diractomo/experiments.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kFailure = 3;

std::pair<int, int> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw diractomo::Error(diractomo::ErrorCode::ParseError, "grid must look like 32x64");
  try {
    std::size_t a = 0, b = 0;
    const int nt = std::stoi(text.substr(0, x), &a);
    const int np = std::stoi(text.substr(x + 1), &b);
    if (a != x || b != text.size() - x - 1) throw std::invalid_argument("trailing");
    return {nt, np};
  } catch (const std::exception&) {
    throw diractomo::Error(diractomo::ErrorCode::ParseError, "grid must look like 32x64");
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace diractomo;
  CLI::App app{"Dirac spinor tomography experiments"};
  app.set_version_flag("--version", "diractomo " + std::string(kLibraryVersion));

  std::string command, config_path, rep, protocol, out, format, grid, group, cls;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> shots;
  std::optional<int> trials, threads;
  std::vector<double> spinor;
  app.add_option("command", command, "fierz-check | roundtrip | feasibility | ambiguity | kernel-check");
  app.add_option("--config", config_path, "JSON config file (snake_case ExperimentConfig fields)");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--shots", shots, "Shots per frame (omit for exact marginals)");
  app.add_option("--trials", trials, "Number of trials");
  app.add_option("--rep", rep, "majorana | standard | chiral");
  app.add_option("--protocol", protocol, "discrete-majorana | combined-st-chiral | continuous-grid");
  app.add_option("--out", out, "Output file (default: standard output)");
  app.add_option("--format", format, "csv | json");
  app.add_option("--grid", grid, "Quadrature grid NTHETAxNPHI, e.g. 32x64");
  app.add_option("--group", group, "rotations | full-lorentz (ambiguity)");
  app.add_option("--class", cls, "generic | weyl (ambiguity)");
  app.add_option("--spinor", spinor, "Explicit spinor: 8 reals re1 im1 ... re4 im4")->expected(8);
  app.add_option("--threads", threads, "Worker threads (0 = all cores); output does not depend on it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw Error(ErrorCode::ParseError, "cannot read config file '" + config_path + "'");
      Json j;
      try {
        j = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed JSON config: ") + e.what());
      }
      cfg = config_from_json(j);
    } else if (command.empty()) {
      throw Error(ErrorCode::ParseError, "a command or --config is required");
    }
    if (!command.empty()) cfg.command = command_from_string(command);
    if (seed) cfg.seed = *seed;
    if (shots) cfg.shots = *shots;
    if (trials) cfg.trials = *trials;
    if (threads) cfg.threads = *threads;
    if (!rep.empty()) cfg.representation = rep_kind_from_string(rep);
    if (!protocol.empty()) cfg.protocol = protocol_kind_from_string(protocol);
    if (!out.empty()) cfg.output_path = out;
    if (!format.empty()) cfg.format = output_format_from_string(format);
    if (!grid.empty()) cfg.grid = parse_grid(grid);
    if (!group.empty()) cfg.group = symmetry_group_from_string(group);
    if (!cls.empty()) cfg.spinor_class = spinor_class_from_string(cls);
    if (!spinor.empty()) {
      std::array<double, 8> s{};
      std::copy(spinor.begin(), spinor.end(), s.begin());
      cfg.spinor = s;
    }
    validate_config(cfg);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  RunResult result;
  try {
    result = run_experiment(cfg);
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return kFailure;
  }
  if (cfg.output_path.empty()) {
    std::cout << result.output;
  } else {
    std::ofstream file(cfg.output_path, std::ios::binary);
    file << result.output;
    if (!file) {
      std::cerr << "cannot write '" << cfg.output_path << "'\n";
      return kFailure;
    }
  }
  std::cerr << result.summary << "\n";
  return result.exit_code;
}
