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

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "diractomo/reconstruct.hpp"
#include "diractomo/spinor.hpp"
#include "diractomo/tomography.hpp"

namespace diractomo {

using Json = nlohmann::json;

// Matrices are row-major arrays of [re, im] pairs. Spinors are
// [re1, im1, ..., re4, im4]. Non-finite reals become null.

Json real_to_json(double x);
Json matrix_to_json(const Matrix4c& m);
Matrix4c matrix_from_json(const Json& j);

Json spinor_to_json(const DiracSpinor& psi);
/// Throws Error(ParseError) unless j is an array of 8 finite numbers.
DiracSpinor spinor_from_json(const Json& j);

Json bilinears_to_json(const BilinearSet& b);
BilinearSet bilinears_from_json(const Json& j);

Json record_to_json(const MarginalRecord& r);
MarginalRecord record_from_json(const Json& j);

Json dataset_to_json(const MarginalDataset& d);
MarginalDataset dataset_from_json(const Json& j);

Json report_to_json(const ReconstructionReport& r);
Json feasibility_to_json(const FeasibilityReport& r);
Json ambiguity_to_json(const AmbiguityReport& r);

/// CSV with header frame,k,w,N (k = 1..4, N empty for exact records).
/// Labels containing ',' are double-quoted.
std::string records_to_csv(const std::vector<MarginalRecord>& records);
std::vector<MarginalRecord> records_from_csv(std::string_view text);

/// Dataset CSV: a leading rep column, then the record columns.
std::string dataset_to_csv(const MarginalDataset& d);
MarginalDataset dataset_from_csv(std::string_view text, const Protocol& protocol);

}  // namespace diractomo
