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
#include <vector>

#include "diractomo/clifford.hpp"
#include "diractomo/lorentz.hpp"
#include "diractomo/spinor.hpp"
#include "diractomo/types.hpp"

namespace diractomo {

/// The canonical measurement: P_k = diag(e_k), k = 0..3 (outcomes 1..4).
struct ProjectorSet {
  std::array<Matrix4c, 4> P;
};

ProjectorSet projectors();

struct MarginalRecord {
  std::string frame = "I";
  std::array<double, 4> w{};
  std::optional<std::int64_t> shots;  // absent for exact data
};

/// w_k = |(L psi)_k|^2 for the lift of `frame` in `rep`. No renormalization,
/// so boost-frame marginals need not sum to psi^dagger psi.
MarginalRecord marginals(const DiracSpinor& psi, const LorentzFrame& frame, const GammaRep& rep);
MarginalRecord marginals(const DiracSpinor& psi, const SpinorLift& lift);

/// Second evaluation path, <psi-bar| L^{-1} gamma_0 P_k L |psi>.
std::array<double, 4> marginals_projector_path(const DiracSpinor& psi, const SpinorLift& lift, const GammaRep& rep);

/// The marginals as linear combinations of covariants, for the named
/// representations (Custom throws UnsupportedRep). `b` must already be the
/// covariants in the measurement frame.
std::array<double, 4> marginal_formula(const BilinearSet& b, RepKind kind);

/// 4x16 matrix M with w = M * b.as_vector() (b in the measurement frame).
Eigen::Matrix<double, 4, 16> marginal_formula_matrix(RepKind kind);

/// max_k |marginal_formula(transform_bilinears(b, frame)) - w_k| for psi
/// interpreted in make_representation(kind).
double marginal_formula_check(const DiracSpinor& psi, const LorentzFrame& frame, RepKind kind);

/// Multinomial counts with probabilities w_k / sum w. The random stream is
/// keyed by (seed, stream + frame label, trial), so records can be sampled in
/// any order. Throws NegativeWeight if some w_k < -1e-12 and InconsistentInput
/// for a zero distribution or shots < 1.
MarginalRecord sample_shots(const MarginalRecord& exact, std::int64_t shots, std::uint64_t seed,
                            std::uint64_t trial = 0, std::string_view stream = "");

struct Protocol {
  enum class Kind { DiscreteMajorana, CombinedStChiral, ContinuousGrid };
  Kind kind = Kind::DiscreteMajorana;
  QuadratureScheme grid;  // ContinuousGrid only

  static Protocol discrete_majorana() { return {Kind::DiscreteMajorana, {}}; }
  static Protocol combined_st_chiral() { return {Kind::CombinedStChiral, {}}; }
  static Protocol continuous_grid(int n_theta = 32, int n_phi = 64) { return {Kind::ContinuousGrid, {n_theta, n_phi}}; }
};

/// "discrete-majorana", "combined-st-chiral", "continuous-grid".
std::string_view to_string(Protocol::Kind kind);
Protocol::Kind protocol_kind_from_string(std::string_view name);

/// Representations whose marginals a protocol records.
std::vector<RepKind> protocol_reps(const Protocol& protocol);
/// The representation in which the protocol's input spinor is expressed.
RepKind reference_rep(const Protocol& protocol);

/// Discrete protocols: I, Rx, Ry, Rz. ContinuousGrid: for every quadrature
/// node, theta-major, the three frames dir(theta,phi;1), dir(theta,phi;2),
/// dir(theta,phi) whose readout axes 1, 2 and 3 point along e3'(theta, phi).
std::vector<LorentzFrame> frame_set(const Protocol& protocol);

}  // namespace diractomo
