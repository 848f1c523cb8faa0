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

#include <complex>

#include <Eigen/Dense>

namespace diractomo {

using Complex = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;
using Matrix4r = Eigen::Matrix4d;
using Vector4r = Eigen::Vector4d;
using Matrix3r = Eigen::Matrix3d;
using Vector3r = Eigen::Vector3d;

/// Tolerance for algebraic identities among 4x4 products of doubles.
inline constexpr double kAlgebraTolerance = 1e-12;

inline constexpr const char* kLibraryVersion = "0.1.0";

}  // namespace diractomo
