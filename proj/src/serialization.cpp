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

#include "diractomo/serialization.hpp"

#include <cmath>
#include <map>

#include "diractomo/error.hpp"
#include "diractomo/format.hpp"

namespace diractomo {
namespace {

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorCode::ParseError, std::string(what) + ": expected a number");
  return j.get<double>();
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Splits CSV text into rows of fields; handles quoted fields.
std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = any = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (any || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
      }
      row.clear();
      cell.clear();
      any = false;
    } else {
      cell += c;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, "unterminated quoted CSV field");
  if (any || !cell.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw Error(ErrorCode::ParseError, "not a number: '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw Error(ErrorCode::ParseError, "not an integer: '" + s + "'");
  return v;
}

// Groups rows (frame, k, w, N) into records in first-appearance order.
std::vector<MarginalRecord> group_records(const std::vector<std::vector<std::string>>& rows, std::size_t offset,
                                          std::vector<std::string>* keys) {
  std::vector<MarginalRecord> records;
  std::map<std::string, std::size_t> index;
  std::vector<int> filled;
  for (const auto& row : rows) {
    const std::string key = offset ? row[0] + "\n" + row[offset] : row[offset];
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, records.size()).first;
      records.push_back({row[offset], {}, std::nullopt});
      filled.push_back(0);
      if (keys) keys->push_back(row[0]);
    }
    MarginalRecord& r = records[it->second];
    const std::int64_t k = parse_int(row[offset + 1]);
    if (k < 1 || k > 4) throw Error(ErrorCode::ParseError, "outcome index must be 1..4");
    if (filled[it->second] & (1 << (k - 1))) throw Error(ErrorCode::ParseError, "duplicate row for " + r.frame);
    filled[it->second] |= 1 << (k - 1);
    r.w[k - 1] = parse_double(row[offset + 2]);
    const std::string& n = row[offset + 3];
    if (!n.empty()) r.shots = parse_int(n);
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (filled[i] != 0xF) throw Error(ErrorCode::ParseError, "record '" + records[i].frame + "' lacks outcomes");
  }
  return records;
}

std::vector<std::vector<std::string>> body_rows(std::string_view text, const std::vector<std::string>& header) {
  auto rows = parse_csv(text);
  std::erase_if(rows, [](const auto& r) { return !r.empty() && !r[0].empty() && r[0][0] == '#'; });
  if (rows.empty() || rows.front() != header) throw Error(ErrorCode::ParseError, "unexpected CSV header");
  rows.erase(rows.begin());
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw Error(ErrorCode::ParseError, "CSV row has the wrong number of fields");
  }
  return rows;
}

void append_record_rows(std::string& out, const std::string& prefix, const MarginalRecord& r) {
  for (int k = 0; k < 4; ++k) {
    out += prefix + csv_field(r.frame) + "," + std::to_string(k + 1) + "," + format_real(r.w[k]) + ",";
    if (r.shots) out += std::to_string(*r.shots);
    out += "\n";
  }
}

}  // namespace

Json real_to_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json matrix_to_json(const Matrix4c& m) {
  Json rows = Json::array();
  for (int i = 0; i < 4; ++i) {
    Json row = Json::array();
    for (int j = 0; j < 4; ++j) row.push_back({real_to_json(m(i, j).real()), real_to_json(m(i, j).imag())});
    rows.push_back(row);
  }
  return rows;
}

Matrix4c matrix_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorCode::ParseError, "matrix must have 4 rows");
  Matrix4c m;
  for (int r = 0; r < 4; ++r) {
    if (!j[r].is_array() || j[r].size() != 4) throw Error(ErrorCode::ParseError, "matrix row must have 4 entries");
    for (int c = 0; c < 4; ++c) {
      const Json& e = j[r][c];
      if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::ParseError, "matrix entry must be [re, im]");
      m(r, c) = Complex(number(e[0], "matrix entry"), number(e[1], "matrix entry"));
    }
  }
  return m;
}

Json spinor_to_json(const DiracSpinor& psi) {
  Json out = Json::array();
  for (int i = 0; i < 4; ++i) {
    out.push_back(real_to_json(psi[i].real()));
    out.push_back(real_to_json(psi[i].imag()));
  }
  return out;
}

DiracSpinor spinor_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 8) throw Error(ErrorCode::ParseError, "spinor must be an array of 8 reals");
  Vector4c v;
  for (int i = 0; i < 4; ++i) v[i] = Complex(number(j[2 * i], "spinor"), number(j[2 * i + 1], "spinor"));
  if (!v.allFinite()) throw Error(ErrorCode::ParseError, "spinor must be finite");
  return DiracSpinor(v);
}

Json bilinears_to_json(const BilinearSet& b) {
  Json s = Json::object();
  for (int i = 0; i < 6; ++i) {
    const auto [mu, nu] = kBivectorSlots[i];
    s[std::to_string(mu) + std::to_string(nu)] = real_to_json(b.S[i]);
  }
  Json j = Json::array(), k = Json::array();
  for (int mu = 0; mu < 4; ++mu) {
    j.push_back(real_to_json(b.J[mu]));
    k.push_back(real_to_json(b.K[mu]));
  }
  return {{"omega1", real_to_json(b.omega1)}, {"J", j}, {"S", s}, {"K", k}, {"omega2", real_to_json(b.omega2)}};
}

BilinearSet bilinears_from_json(const Json& j) {
  BilinearSet b;
  b.omega1 = number(field(j, "omega1"), "omega1");
  b.omega2 = number(field(j, "omega2"), "omega2");
  const Json& jj = field(j, "J");
  const Json& kk = field(j, "K");
  if (!jj.is_array() || jj.size() != 4 || !kk.is_array() || kk.size() != 4) {
    throw Error(ErrorCode::ParseError, "J and K must have 4 components");
  }
  for (int mu = 0; mu < 4; ++mu) {
    b.J[mu] = number(jj[mu], "J");
    b.K[mu] = number(kk[mu], "K");
  }
  const Json& s = field(j, "S");
  for (int i = 0; i < 6; ++i) {
    const auto [mu, nu] = kBivectorSlots[i];
    const std::string key = std::to_string(mu) + std::to_string(nu);
    b.S[i] = number(field(s, key.c_str()), "S");
  }
  return b;
}

Json record_to_json(const MarginalRecord& r) {
  Json w = Json::array();
  for (double x : r.w) w.push_back(real_to_json(x));
  return {{"frame", r.frame}, {"w", w}, {"N", r.shots ? Json(*r.shots) : Json(nullptr)}};
}

MarginalRecord record_from_json(const Json& j) {
  MarginalRecord r;
  const Json& frame = field(j, "frame");
  if (!frame.is_string()) throw Error(ErrorCode::ParseError, "frame must be a string");
  r.frame = frame.get<std::string>();
  const Json& w = field(j, "w");
  if (!w.is_array() || w.size() != 4) throw Error(ErrorCode::ParseError, "w must have 4 entries");
  for (int k = 0; k < 4; ++k) r.w[k] = number(w[k], "w");
  if (j.contains("N") && !j.at("N").is_null()) {
    if (!j.at("N").is_number_integer()) throw Error(ErrorCode::ParseError, "N must be an integer");
    r.shots = j.at("N").get<std::int64_t>();
  }
  return r;
}

Json dataset_to_json(const MarginalDataset& d) {
  Json entries = Json::array();
  for (const MarginalEntry& e : d.entries) {
    Json r = record_to_json(e.record);
    r["rep"] = std::string(to_string(e.rep));
    entries.push_back(r);
  }
  Json out = {{"protocol", std::string(to_string(d.protocol.kind))}, {"entries", entries}};
  if (d.protocol.kind == Protocol::Kind::ContinuousGrid) out["grid"] = {d.protocol.grid.n_theta, d.protocol.grid.n_phi};
  return out;
}

MarginalDataset dataset_from_json(const Json& j) {
  MarginalDataset d;
  const Json& protocol = field(j, "protocol");
  if (!protocol.is_string()) throw Error(ErrorCode::ParseError, "protocol must be a string");
  d.protocol.kind = protocol_kind_from_string(protocol.get<std::string>());
  if (j.contains("grid")) {
    const Json& g = j.at("grid");
    if (!g.is_array() || g.size() != 2) throw Error(ErrorCode::ParseError, "grid must be [n_theta, n_phi]");
    d.protocol.grid = {g[0].get<int>(), g[1].get<int>()};
  }
  const Json& entries = field(j, "entries");
  if (!entries.is_array()) throw Error(ErrorCode::ParseError, "entries must be an array");
  for (const Json& e : entries) {
    const Json& rep = field(e, "rep");
    if (!rep.is_string()) throw Error(ErrorCode::ParseError, "rep must be a string");
    d.entries.push_back({rep_kind_from_string(rep.get<std::string>()), record_from_json(e)});
  }
  d.validate();
  return d;
}

Json report_to_json(const ReconstructionReport& r) {
  Json candidates = Json::array(), covariants = Json::array(), fierz = Json::array(), residuals = Json::array();
  for (std::size_t i = 0; i < r.candidates.size(); ++i) {
    candidates.push_back(spinor_to_json(r.candidates[i]));
    covariants.push_back(bilinears_to_json(r.covariants[i]));
    residuals.push_back(real_to_json(r.marginal_residuals[i]));
    Json f = Json::array();
    for (double x : r.fierz_residuals[i]) f.push_back(real_to_json(x));
    fierz.push_back(f);
  }
  Json constraints = Json::array();
  for (double x : r.constraint_residuals) constraints.push_back(real_to_json(x));
  return {{"rep", std::string(to_string(r.rep))},
          {"candidates", candidates},
          {"covariants", covariants},
          {"marginal_residuals", residuals},
          {"fierz_residuals", fierz},
          {"constraint_residuals", constraints},
          {"linear_residual", real_to_json(r.linear_residual)},
          {"tolerance", real_to_json(r.tolerance)},
          {"ambiguity_flag", r.ambiguity_flag},
          {"diagnostics", r.diagnostics}};
}

Json feasibility_to_json(const FeasibilityReport& r) {
  Json sv = Json::array();
  for (double x : r.singular_values) sv.push_back(real_to_json(x));
  return {{"rep", std::string(to_string(r.rep_kind))},
          {"group", std::string(to_string(r.group))},
          {"class", std::string(to_string(r.spinor_class))},
          {"span_rank", r.span_rank},
          {"class_dimension", r.class_dimension},
          {"verdict", std::string(to_string(r.verdict))},
          {"recoverable_slots", r.recoverable_slots},
          {"singular_values", sv}};
}

Json ambiguity_to_json(const AmbiguityReport& r) {
  return {{"found", r.found},
          {"psi", spinor_to_json(r.psi)},
          {"partner", r.found || std::isfinite(r.marginal_residual) ? spinor_to_json(r.partner) : Json(nullptr)},
          {"distance", real_to_json(r.distance)},
          {"marginal_residual", real_to_json(r.marginal_residual)},
          {"seed_strategy", r.seed_strategy},
          {"frames", r.frames}};
}

std::string records_to_csv(const std::vector<MarginalRecord>& records) {
  std::string out = "frame,k,w,N\n";
  for (const MarginalRecord& r : records) append_record_rows(out, "", r);
  return out;
}

std::vector<MarginalRecord> records_from_csv(std::string_view text) {
  return group_records(body_rows(text, {"frame", "k", "w", "N"}), 0, nullptr);
}

std::string dataset_to_csv(const MarginalDataset& d) {
  std::string out = "rep,frame,k,w,N\n";
  for (const MarginalEntry& e : d.entries) append_record_rows(out, std::string(to_string(e.rep)) + ",", e.record);
  return out;
}

MarginalDataset dataset_from_csv(std::string_view text, const Protocol& protocol) {
  std::vector<std::string> reps;
  const auto records = group_records(body_rows(text, {"rep", "frame", "k", "w", "N"}), 1, &reps);
  MarginalDataset d;
  d.protocol = protocol;
  for (std::size_t i = 0; i < records.size(); ++i) d.entries.push_back({rep_kind_from_string(reps[i]), records[i]});
  d.validate();
  return d;
}

}  // namespace diractomo
