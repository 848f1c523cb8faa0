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

#include <gtest/gtest.h>

#include <limits>

#include "diractomo/error.hpp"

using namespace diractomo;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::NoValidCandidate;
}

TEST(Serialization, SpinorJson) {
  std::mt19937_64 rng(1);
  const DiracSpinor psi = random_spinor(rng);
  const Json j = spinor_to_json(psi);
  ASSERT_EQ(j.size(), 8u);
  EXPECT_EQ(j[2].get<double>(), psi[1].real());
  EXPECT_EQ(j[3].get<double>(), psi[1].imag());
  EXPECT_EQ(spinor_from_json(Json::parse(j.dump())).components(), psi.components());
  EXPECT_EQ(code_of([] { spinor_from_json(Json::array({1, 2, 3})); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { spinor_from_json(Json::parse("[1,0,0,0,0,0,0,null]")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { spinor_from_json(Json("psi")); }), ErrorCode::ParseError);
}

TEST(Serialization, NonFiniteBecomesNull) {
  EXPECT_TRUE(real_to_json(std::numeric_limits<double>::quiet_NaN()).is_null());
  EXPECT_TRUE(real_to_json(std::numeric_limits<double>::infinity()).is_null());
  EXPECT_EQ(real_to_json(0.5).get<double>(), 0.5);
}

TEST(Serialization, MatrixJson) {
  Matrix4c m;
  for (int i = 0; i < 16; ++i) m(i / 4, i % 4) = Complex(i, -0.5 * i);
  const Json j = matrix_to_json(m);
  EXPECT_EQ(j[1][2][1].get<double>(), -3.0);
  EXPECT_EQ(matrix_from_json(j), m);
}

TEST(Serialization, BilinearsJson) {
  std::mt19937_64 rng(2);
  const BilinearSet b = bilinears(random_spinor(rng), named_representation(RepKind::Standard));
  const Json j = bilinears_to_json(b);
  EXPECT_EQ(j.at("S").at("31").get<double>(), b.S[5]);
  EXPECT_EQ(j.at("omega2").get<double>(), b.omega2);
  EXPECT_EQ(bilinears_from_json(Json::parse(j.dump())).as_vector(), b.as_vector());
}

TEST(Serialization, RecordsAndDatasetsJson) {
  std::mt19937_64 rng(3);
  const MarginalDataset exact = simulate_dataset(random_spinor(rng), Protocol::combined_st_chiral());
  const MarginalDataset back = dataset_from_json(Json::parse(dataset_to_json(exact).dump()));
  EXPECT_EQ(back.protocol.kind, exact.protocol.kind);
  ASSERT_EQ(back.entries.size(), exact.entries.size());
  for (std::size_t i = 0; i < back.entries.size(); ++i) {
    EXPECT_EQ(back.entries[i].rep, exact.entries[i].rep);
    EXPECT_EQ(back.entries[i].record.frame, exact.entries[i].record.frame);
    EXPECT_EQ(back.entries[i].record.w, exact.entries[i].record.w);
    EXPECT_FALSE(back.entries[i].record.shots.has_value());
  }
  const MarginalRecord shot{"Rx", {0.25, 0.5, 0.25, 0}, 4};
  const MarginalRecord r = record_from_json(record_to_json(shot));
  EXPECT_EQ(r.shots, 4);
  EXPECT_EQ(r.w, shot.w);

  const MarginalDataset grid = simulate_dataset(DiracSpinor::basis(0), Protocol::continuous_grid(3, 4));
  const MarginalDataset grid_back = dataset_from_json(dataset_to_json(grid));
  EXPECT_EQ(grid_back.protocol.grid.n_theta, 3);
  EXPECT_EQ(grid_back.protocol.grid.n_phi, 4);
}

TEST(Serialization, RecordsCsvRoundTrip) {
  std::mt19937_64 rng(4);
  const DiracSpinor psi = random_spinor(rng);
  const GammaRep& rep = named_representation(RepKind::Majorana);
  std::vector<MarginalRecord> records;
  for (const LorentzFrame& f : {frame_rx(), boost(Vector3r::UnitZ(), 0.3), direction_frame(0.2, 0.4, 2)}) {
    records.push_back(marginals(psi, f, rep));
  }
  records.push_back(sample_shots(marginals(psi, frame_rz(), rep), 1000, 5));
  const std::string csv = records_to_csv(records);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "frame,k,w,N");
  EXPECT_NE(csv.find("\"boost("), std::string::npos);
  const auto back = records_from_csv("# produced by a test\n" + csv);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(back[i].frame, records[i].frame);
    EXPECT_EQ(back[i].w, records[i].w);
    EXPECT_EQ(back[i].shots, records[i].shots);
  }
  EXPECT_EQ(code_of([] { records_from_csv("frame,k,w,N\nI,1,x,\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { records_from_csv("frame,k,w,N\nI,7,0.5,\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { records_from_csv("frame,k,w\n"); }), ErrorCode::ParseError);
}

TEST(Serialization, DatasetCsvRoundTrip) {
  std::mt19937_64 rng(5);
  const MarginalDataset d = simulate_dataset(random_spinor(rng), Protocol::combined_st_chiral(), 500, 2);
  const std::string csv = dataset_to_csv(d);
  const MarginalDataset back = dataset_from_csv(csv, Protocol::combined_st_chiral());
  ASSERT_EQ(back.entries.size(), d.entries.size());
  for (std::size_t i = 0; i < d.entries.size(); ++i) {
    EXPECT_EQ(back.entries[i].rep, d.entries[i].rep);
    EXPECT_EQ(back.entries[i].record.w, d.entries[i].record.w);
    EXPECT_EQ(back.entries[i].record.shots, 500);
  }
  EXPECT_EQ(dataset_to_csv(back), csv);
}

TEST(Serialization, Reports) {
  std::mt19937_64 rng(6);
  const ReconstructionReport r = reconstruct(simulate_dataset(random_spinor(rng), Protocol::discrete_majorana()));
  const Json j = report_to_json(r);
  EXPECT_EQ(j.at("candidates").size(), r.candidates.size());
  EXPECT_EQ(j.at("ambiguity_flag").get<bool>(), r.ambiguity_flag);
  const Json f = feasibility_to_json(representation_feasibility(RepKind::Standard, SymmetryGroup::Rotations));
  EXPECT_EQ(f.at("span_rank").get<int>(), 6);
  EXPECT_EQ(f.at("verdict").get<std::string>(), "incomplete");
}

}  // namespace
