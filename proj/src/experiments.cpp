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

#include "diractomo/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <set>
#include <thread>
#include <vector>

#include "diractomo/error.hpp"
#include "diractomo/format.hpp"
#include "diractomo/random.hpp"

namespace diractomo {
namespace {

constexpr std::array<std::string_view, 5> kCommandNames = {"fierz-check", "roundtrip", "feasibility", "ambiguity",
                                                           "kernel-check"};

// Runs body(i) for i in [0, n) on `threads` workers. The first exception (by
// index) is rethrown after all workers finish.
template <typename Body>
void parallel_for(int n, int threads, Body body) {
  int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, std::max(n, 1));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

DiracSpinor trial_spinor(const ExperimentConfig& cfg, int trial) {
  if (cfg.spinor) {
    const auto& s = *cfg.spinor;
    return DiracSpinor(Complex(s[0], s[1]), Complex(s[2], s[3]), Complex(s[4], s[5]), Complex(s[6], s[7]));
  }
  std::mt19937_64 rng = keyed_engine(cfg.seed, "spinor", static_cast<std::uint64_t>(trial));
  return random_spinor(rng);
}

DiracSpinor weyl_spinor(const ExperimentConfig& cfg, int trial, RepKind kind) {
  std::mt19937_64 rng = keyed_engine(cfg.seed, "weyl-spinor", static_cast<std::uint64_t>(trial));
  std::normal_distribution<double> normal;
  Vector4c xi = Vector4c::Zero();
  for (int i = 0; i < 2; ++i) {
    const double re = normal(rng);
    xi[i] = Complex(re, normal(rng));
  }
  xi.normalize();
  return DiracSpinor(change_representation(xi, named_representation(RepKind::Chiral), named_representation(kind)));
}

std::string csv_header(const ExperimentConfig& cfg) {
  return "# diractomo " + std::string(kLibraryVersion) + "\n# config_hash " + config_hash(cfg) + "\n# command " +
         std::string(to_string(cfg.command)) + "\n";
}

Json json_header(const ExperimentConfig& cfg) {
  return {{"version", "diractomo " + std::string(kLibraryVersion)},
          {"config_hash", config_hash(cfg)},
          {"config", config_to_json(cfg)}};
}

std::string render(const ExperimentConfig& cfg, const std::string& csv_body, Json json) {
  if (cfg.format == OutputFormat::Csv) return csv_header(cfg) + csv_body;
  Json out = json_header(cfg);
  out.update(json);
  return out.dump(2) + "\n";
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string spinor_csv(const DiracSpinor& psi) {
  std::string out;
  for (int i = 0; i < 4; ++i) out += "," + format_real(psi[i].real()) + "," + format_real(psi[i].imag());
  return out;
}

template <typename T>
T json_get(const Json& j, const char* key, const char* type) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::ParseError, std::string("config field '") + key + "' must be " + type);
  }
}

}  // namespace

std::string_view to_string(Command command) { return kCommandNames[static_cast<int>(command)]; }

Command command_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kCommandNames.size(); ++i) {
    if (kCommandNames[i] == name) return static_cast<Command>(i);
  }
  throw Error(ErrorCode::ParseError, "unknown command '" + std::string(name) + "'");
}

std::string_view to_string(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat output_format_from_string(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw Error(ErrorCode::ParseError, "unknown format '" + std::string(name) + "'");
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "config must be a JSON object");
  static const std::set<std::string> known = {"command", "representation", "protocol", "shots",
                                              "seed", "trials", "grid", "spinor",
                                              "output_path", "format", "group", "spinor_class",
                                              "threads"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw Error(ErrorCode::ParseError, "unknown config field '" + item.key() + "'");
  }
  ExperimentConfig cfg;
  auto str = [&](const char* key) { return json_get<std::string>(j.at(key), key, "a string"); };
  if (j.contains("command")) cfg.command = command_from_string(str("command"));
  if (j.contains("representation")) cfg.representation = rep_kind_from_string(str("representation"));
  if (j.contains("protocol")) cfg.protocol = protocol_kind_from_string(str("protocol"));
  if (j.contains("shots") && !j.at("shots").is_null()) {
    if (!j.at("shots").is_number_integer()) throw Error(ErrorCode::ParseError, "shots must be an integer");
    cfg.shots = j.at("shots").get<std::int64_t>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw Error(ErrorCode::ParseError, "seed must be a non-negative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("trials")) {
    if (!j.at("trials").is_number_integer()) throw Error(ErrorCode::ParseError, "trials must be an integer");
    cfg.trials = j.at("trials").get<int>();
  }
  if (j.contains("grid") && !j.at("grid").is_null()) {
    const Json& g = j.at("grid");
    if (!g.is_array() || g.size() != 2 || !g[0].is_number_integer() || !g[1].is_number_integer()) {
      throw Error(ErrorCode::ParseError, "grid must be [n_theta, n_phi]");
    }
    cfg.grid = std::make_pair(g[0].get<int>(), g[1].get<int>());
  }
  if (j.contains("spinor") && !j.at("spinor").is_null()) {
    const DiracSpinor psi = spinor_from_json(j.at("spinor"));
    std::array<double, 8> s{};
    for (int i = 0; i < 4; ++i) {
      s[2 * i] = psi[i].real();
      s[2 * i + 1] = psi[i].imag();
    }
    cfg.spinor = s;
  }
  if (j.contains("output_path")) cfg.output_path = str("output_path");
  if (j.contains("format")) cfg.format = output_format_from_string(str("format"));
  if (j.contains("group")) cfg.group = symmetry_group_from_string(str("group"));
  if (j.contains("spinor_class")) cfg.spinor_class = spinor_class_from_string(str("spinor_class"));
  if (j.contains("threads")) {
    if (!j.at("threads").is_number_integer()) throw Error(ErrorCode::ParseError, "threads must be an integer");
    cfg.threads = j.at("threads").get<int>();
  }
  validate_config(cfg);
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.representation == RepKind::Custom) throw Error(ErrorCode::ParseError, "representation must be named");
  if (cfg.shots && *cfg.shots < 1) throw Error(ErrorCode::ParseError, "shots must be at least 1");
  if (cfg.trials < 1) throw Error(ErrorCode::ParseError, "trials must be at least 1");
  if (cfg.grid && (cfg.grid->first < 2 || cfg.grid->second < 2)) {
    throw Error(ErrorCode::ParseError, "grid dimensions must be at least 2");
  }
  if (cfg.spinor) {
    double norm = 0.0;
    for (double x : *cfg.spinor) {
      if (!std::isfinite(x)) throw Error(ErrorCode::ParseError, "spinor must be finite");
      norm += x * x;
    }
    if (norm == 0.0) throw Error(ErrorCode::ParseError, "spinor must be nonzero");
  }
  if (cfg.threads < 0) throw Error(ErrorCode::ParseError, "threads must be non-negative");
}

Json config_to_json(const ExperimentConfig& cfg, bool complete) {
  Json j = {{"command", std::string(to_string(cfg.command))},
            {"representation", std::string(to_string(cfg.representation))},
            {"protocol", std::string(to_string(cfg.protocol))},
            {"shots", cfg.shots ? Json(*cfg.shots) : Json(nullptr)},
            {"seed", cfg.seed},
            {"trials", cfg.trials},
            {"grid", cfg.grid ? Json::array({cfg.grid->first, cfg.grid->second}) : Json(nullptr)},
            {"spinor", cfg.spinor ? Json(*cfg.spinor) : Json(nullptr)},
            {"format", std::string(to_string(cfg.format))},
            {"group", std::string(to_string(cfg.group))},
            {"spinor_class", std::string(to_string(cfg.spinor_class))}};
  if (complete) {
    j["output_path"] = cfg.output_path;
    j["threads"] = cfg.threads;
  }
  return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(config_to_json(cfg).dump())));
  return buf;
}

Protocol protocol_of(const ExperimentConfig& cfg) {
  Protocol p{cfg.protocol, {}};
  if (cfg.grid) p.grid = {cfg.grid->first, cfg.grid->second};
  return p;
}

RunResult run_fierz_check(const ExperimentConfig& cfg) {
  const GammaRep& rep = named_representation(cfg.representation);
  std::vector<std::array<double, 9>> per_trial(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](int t) {
    const DiracSpinor psi = trial_spinor(cfg, t);
    const double scale = std::max(1.0, std::pow(psi.norm_squared(), 2));
    const auto r = fierz_residuals(bilinears(psi, rep));
    for (int i = 0; i < 9; ++i) per_trial[t][i] = std::abs(r[i]) / scale;
  });
  static constexpr std::array<std::string_view, 9> names = {
      "scalar_norm", "axial_norm", "orthogonality", "tensor_01", "tensor_02",
      "tensor_03",   "tensor_12",  "tensor_23",     "tensor_31"};
  std::array<double, 9> worst{};
  for (const auto& r : per_trial) {
    for (int i = 0; i < 9; ++i) worst[i] = std::max(worst[i], r[i]);
  }
  const double overall = *std::max_element(worst.begin(), worst.end());
  const bool pass = overall < 1e-10;

  std::string csv = "identity,max_residual\n";
  Json rows = Json::object();
  for (int i = 0; i < 9; ++i) {
    csv += std::string(names[i]) + "," + format_real(worst[i]) + "\n";
    rows[std::string(names[i])] = worst[i];
  }
  RunResult result;
  result.exit_code = pass ? 0 : 3;
  result.output = render(cfg, csv, {{"max_residual", rows}, {"pass", pass}});
  result.summary = "fierz-check: max scaled residual " + format_real(overall) + (pass ? " (pass)" : " (FAIL)");
  return result;
}

RunResult run_roundtrip(const ExperimentConfig& cfg) {
  const Protocol protocol = protocol_of(cfg);
  struct Row {
    double distance = std::numeric_limits<double>::quiet_NaN();
    int candidates = 0;
    bool ambiguous = false;
    double marginal = std::numeric_limits<double>::quiet_NaN();
    double constraint = std::numeric_limits<double>::quiet_NaN();
    double linear = std::numeric_limits<double>::quiet_NaN();
    std::string status = "ok";
  };
  std::vector<Row> rows(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](int t) {
    const DiracSpinor psi = trial_spinor(cfg, t).normalized();
    Row& row = rows[t];
    try {
      const MarginalDataset data = simulate_dataset(psi, protocol, cfg.shots, cfg.seed, static_cast<std::uint64_t>(t));
      const ReconstructionReport report = reconstruct(data);
      row.distance = std::numeric_limits<double>::infinity();
      for (const DiracSpinor& c : report.candidates) row.distance = std::min(row.distance, phase_distance(c, psi));
      row.candidates = static_cast<int>(report.candidates.size());
      row.ambiguous = report.ambiguity_flag;
      row.marginal = report.marginal_residuals.front();
      row.constraint = *std::max_element(report.constraint_residuals.begin(), report.constraint_residuals.end());
      row.linear = report.linear_residual;
    } catch (const Error& e) {
      row.status = std::string(to_string(e.code()));
    }
  });

  const double limit = cfg.protocol == Protocol::Kind::ContinuousGrid ? 1e-8 : 1e-9;
  std::vector<double> distances;
  int failures = 0;
  for (const Row& r : rows) {
    if (r.status == "ok") distances.push_back(r.distance);
    if (r.status != "ok" || (!cfg.shots && !(r.distance < limit))) ++failures;
  }
  const double med = median(distances);
  const double max = distances.empty() ? std::numeric_limits<double>::quiet_NaN()
                                       : *std::max_element(distances.begin(), distances.end());

  std::string csv = "trial,phase_distance,candidates,ambiguity_flag,marginal_residual,constraint_residual,"
                    "linear_residual,status\n";
  Json trials = Json::array();
  for (int t = 0; t < cfg.trials; ++t) {
    const Row& r = rows[t];
    csv += std::to_string(t) + "," + format_real(r.distance) + "," + std::to_string(r.candidates) + "," +
           (r.ambiguous ? "true" : "false") + "," + format_real(r.marginal) + "," + format_real(r.constraint) + "," +
           format_real(r.linear) + "," + r.status + "\n";
    trials.push_back({{"trial", t},
                      {"phase_distance", real_to_json(r.distance)},
                      {"candidates", r.candidates},
                      {"ambiguity_flag", r.ambiguous},
                      {"marginal_residual", real_to_json(r.marginal)},
                      {"constraint_residual", real_to_json(r.constraint)},
                      {"linear_residual", real_to_json(r.linear)},
                      {"status", r.status}});
  }
  csv += "# summary median_phase_distance " + format_real(med) + " max_phase_distance " + format_real(max) +
         " failures " + std::to_string(failures) + "\n";

  RunResult result;
  // Shot data has no fixed accuracy target; only exact data can fail.
  result.exit_code = (!cfg.shots && failures > 0) ? 3 : 0;
  result.output = render(cfg, csv,
                         {{"trials", trials},
                          {"summary",
                           {{"median_phase_distance", real_to_json(med)},
                            {"max_phase_distance", real_to_json(max)},
                            {"failures", failures}}}});
  result.summary = "roundtrip " + std::string(to_string(cfg.protocol)) + ": median " + format_real(med) + ", max " +
                   format_real(max) + ", failures " + std::to_string(failures);
  return result;
}

RunResult run_feasibility(const ExperimentConfig& cfg) {
  struct Key {
    RepKind rep;
    SymmetryGroup group;
    SpinorClass cls;
  };
  std::vector<Key> keys;
  for (SpinorClass cls : {SpinorClass::Generic, SpinorClass::Weyl}) {
    for (RepKind rep : {RepKind::Majorana, RepKind::Standard, RepKind::Chiral}) {
      for (SymmetryGroup g : {SymmetryGroup::Rotations, SymmetryGroup::FullRestrictedLorentz}) {
        keys.push_back({rep, g, cls});
      }
    }
  }
  std::vector<FeasibilityReport> reports(keys.size());
  parallel_for(static_cast<int>(keys.size()), cfg.threads, [&](int i) {
    reports[i] = representation_feasibility(keys[i].rep, keys[i].group, keys[i].cls, cfg.seed);
  });
  std::string csv = "rep,group,class,span_rank,class_dimension,verdict,recoverable_slots\n";
  Json table = Json::array();
  for (const FeasibilityReport& r : reports) {
    std::string slots;
    for (const std::string& s : r.recoverable_slots) slots += (slots.empty() ? "" : " ") + s;
    csv += std::string(to_string(r.rep_kind)) + "," + std::string(to_string(r.group)) + "," +
           std::string(to_string(r.spinor_class)) + "," + std::to_string(r.span_rank) + "," +
           std::to_string(r.class_dimension) + "," + std::string(to_string(r.verdict)) + "," + slots + "\n";
    table.push_back(feasibility_to_json(r));
  }
  RunResult result;
  result.output = render(cfg, csv, {{"table", table}});
  result.summary = "feasibility: " + std::to_string(reports.size()) + " rows";
  return result;
}

RunResult run_ambiguity(const ExperimentConfig& cfg) {
  std::vector<AmbiguityReport> reports(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](int t) {
    const DiracSpinor psi = cfg.spinor_class == SpinorClass::Weyl && !cfg.spinor
                                ? weyl_spinor(cfg, t, cfg.representation)
                                : trial_spinor(cfg, t).normalized();
    reports[t] = ambiguity_probe(psi, cfg.representation, cfg.group, cfg.spinor_class, cfg.seed);
  });
  std::string csv = "trial,found,distance,marginal_residual,seed_strategy,frames";
  for (const char* who : {"psi", "partner"}) {
    for (int i = 0; i < 4; ++i) csv += std::string(",") + who + std::to_string(i + 1) + "_re," + who +
                                       std::to_string(i + 1) + "_im";
  }
  csv += "\n";
  Json rows = Json::array();
  int found = 0;
  for (int t = 0; t < cfg.trials; ++t) {
    const AmbiguityReport& r = reports[t];
    found += r.found;
    csv += std::to_string(t) + "," + (r.found ? "true" : "false") + "," + format_real(r.distance) + "," +
           format_real(r.marginal_residual) + "," + r.seed_strategy + "," + std::to_string(r.frames) +
           spinor_csv(r.psi) + spinor_csv(r.partner) + "\n";
    Json row = ambiguity_to_json(r);
    row["trial"] = t;
    rows.push_back(row);
  }
  RunResult result;
  result.output = render(cfg, csv, {{"trials", rows}, {"found", found}});
  result.summary = "ambiguity " + std::string(to_string(cfg.representation)) + "/" +
                   std::string(to_string(cfg.group)) + ": partners found in " + std::to_string(found) + " of " +
                   std::to_string(cfg.trials) + " trials";
  return result;
}

RunResult run_kernel_check(const ExperimentConfig& cfg) {
  const QuadratureScheme scheme = protocol_of(cfg).grid;
  const auto nodes = quadrature_nodes(scheme);
  std::vector<std::pair<Vector3r, double>> rows(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](int t) {
    std::mt19937_64 rng = keyed_engine(cfg.seed, "vector", static_cast<std::uint64_t>(t));
    std::normal_distribution<double> normal;
    Vector3r v;
    for (int i = 0; i < 3; ++i) v[i] = normal(rng);
    std::vector<DirectionSample> samples;
    samples.reserve(nodes.size());
    for (const QuadratureNode& n : nodes) samples.push_back({n.theta, n.phi, unit_direction(n.theta, n.phi).dot(v)});
    rows[t] = {v, (kernel_vector_recon(samples, scheme) - v).norm()};
  });
  double worst = 0.0;
  std::string csv = "trial,vx,vy,vz,error\n";
  Json trials = Json::array();
  for (int t = 0; t < cfg.trials; ++t) {
    const auto& [v, err] = rows[t];
    worst = std::max(worst, err);
    csv += std::to_string(t) + "," + format_real(v.x()) + "," + format_real(v.y()) + "," + format_real(v.z()) + "," +
           format_real(err) + "\n";
    trials.push_back({{"trial", t}, {"v", {v.x(), v.y(), v.z()}}, {"error", err}});
  }
  const bool pass = worst < 1e-10;
  RunResult result;
  result.exit_code = pass ? 0 : 3;
  result.output = render(cfg, csv, {{"trials", trials}, {"max_error", worst}, {"pass", pass}});
  result.summary = "kernel-check " + std::to_string(scheme.n_theta) + "x" + std::to_string(scheme.n_phi) +
                   ": max error " + format_real(worst) + (pass ? " (pass)" : " (FAIL)");
  return result;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  switch (cfg.command) {
    case Command::FierzCheck: return run_fierz_check(cfg);
    case Command::Roundtrip: return run_roundtrip(cfg);
    case Command::Feasibility: return run_feasibility(cfg);
    case Command::Ambiguity: return run_ambiguity(cfg);
    case Command::KernelCheck: return run_kernel_check(cfg);
  }
  throw Error(ErrorCode::ParseError, "unknown command");
}

}  // namespace diractomo
