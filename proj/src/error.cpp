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

#include "diractomo/error.hpp"

namespace diractomo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonUnitary: return "NonUnitary";
    case ErrorCode::UnsupportedRep: return "UnsupportedRep";
    case ErrorCode::NonRealCovariant: return "NonRealCovariant";
    case ErrorCode::DegenerateAnchor: return "DegenerateAnchor";
    case ErrorCode::BadAxis: return "BadAxis";
    case ErrorCode::NotConnected: return "NotConnected";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::MissingFrame: return "MissingFrame";
    case ErrorCode::InconsistentInput: return "InconsistentInput";
    case ErrorCode::NoValidCandidate: return "NoValidCandidate";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace diractomo
