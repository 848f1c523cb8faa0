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
#include <vector>

#include "diractomo/clifford.hpp"
#include "diractomo/lorentz.hpp"
#include "diractomo/spinor.hpp"
#include "diractomo/tomography.hpp"

namespace diractomo {

struct MarginalEntry {
  RepKind rep = RepKind::Majorana;
  MarginalRecord record;
};

struct MarginalDataset {
  Protocol protocol;
  std::vector<MarginalEntry> entries;

  /// nullptr when absent.
  const MarginalRecord* find(RepKind rep, std::string_view frame) const;
  /// Smallest shot count over the records; empty for exact data.
  std::optional<std::int64_t> min_shots() const;
  /// Throws InconsistentInput on duplicate (rep, frame) keys.
  void validate() const;
};

/// Exact (shots empty) or shot-sampled marginals of `psi` for every
/// (rep, frame) of the protocol. `psi` is expressed in reference_rep(protocol);
/// other representations see U_to U_from^dagger psi.
MarginalDataset simulate_dataset(const DiracSpinor& psi, const Protocol& protocol,
                                 std::optional<std::int64_t> shots = std::nullopt, std::uint64_t seed = 0,
                                 std::uint64_t trial = 0);

/// Solves the 16 discrete Majorana marginals for J and S by least squares
/// (the system is overdetermined by the 6 constraints). Output in upper-index
/// storage; only the J and S slots are set. Throws MissingFrame.
BilinearSet recover_JS_majorana(const MarginalDataset& data, double* residual = nullptr);

struct FierzCandidate {
  double omega1 = 0.0;
  double omega2 = 0.0;
  Vector4r K = Vector4r::Zero();  // upper index
  std::array<double, 9> fierz{};
};

struct FierzCompletion {
  std::vector<FierzCandidate> candidates;
  bool null_class = false;
  bool degenerate = false;  // J = S = 0
  double parallel_defect = 0.0;  // second/first singular value of [a b]
};

/// Completes (Omega1, Omega2, K) from J and S (upper index in `b`): with
/// a_nu = J^mu (*S)_{mu nu} and b_nu = -J^mu S_{mu nu}, the matrix [a b] is
/// K_nu (Omega1, Omega2); magnitudes follow from Omega1^2 + Omega2^2 = J.J.
/// Both global signs are returned. Null J (J.J below 1e-10 |J|^2) gives
/// Omega = 0 with K = 0 when S != 0 and K = +-J when S = 0. Throws
/// InconsistentInput when [a b] is not rank one within `parallel_tolerance`.
FierzCompletion fierz_completion(const BilinearSet& b, double parallel_tolerance = 1e-6);

struct ReconstructionReport {
  RepKind rep = RepKind::Majorana;  // basis of the candidates
  std::vector<DiracSpinor> candidates;  // sorted by marginal residual
  std::vector<BilinearSet> covariants;
  std::vector<double> marginal_residuals;  // max |w_candidate - w_data|
  std::vector<std::array<double, 9>> fierz_residuals;
  std::array<double, 6> constraint_residuals{};
  double linear_residual = 0.0;  // least-squares residual of the linear stage
  double tolerance = 0.0;  // tau_recon used for candidate validation
  bool ambiguity_flag = false;
  std::string diagnostics;
};

/// 1e-10 for exact data, 3/sqrt(N) for shot data.
double recon_tolerance(const MarginalDataset& data);

/// Discrete Majorana protocol. Throws MissingFrame, UnsupportedRep (rep not
/// Majorana), NoValidCandidate.
ReconstructionReport reconstruct_majorana(const MarginalDataset& data, const GammaRep& rep);

/// Standard + Chiral rotation marginals; candidates in the standard basis.
ReconstructionReport reconstruct_combined(const MarginalDataset& data);

/// Kernel reconstruction of J, the polar part S^{0k} and the axial part
/// (S^{23}, S^{31}, S^{12}) from the three readout families of the grid.
ReconstructionReport reconstruct_continuous(const MarginalDataset& data, const GammaRep& rep);

/// Dispatches on data.protocol.
ReconstructionReport reconstruct(const MarginalDataset& data);

/// J0 agreement between I and Rx, Ry, Rz, then the S01 (Rx), J2 (Ry) and
/// S12 (Rz) repeats, all in lower-index frame components. Needs Majorana
/// records for the discrete frames; throws MissingFrame otherwise.
std::array<double, 6> constraint_residuals(const MarginalDataset& data);

enum class SymmetryGroup { Rotations, FullRestrictedLorentz };
enum class SpinorClass { Generic, Weyl };
enum class Verdict { Complete, Incomplete };

std::string_view to_string(SymmetryGroup group);
std::string_view to_string(SpinorClass cls);
std::string_view to_string(Verdict verdict);
SymmetryGroup symmetry_group_from_string(std::string_view name);
SpinorClass spinor_class_from_string(std::string_view name);

/// Deterministic sample of group elements (identity first).
std::vector<LorentzFrame> group_sample(SymmetryGroup group, int count, std::uint64_t seed);

struct FeasibilityReport {
  RepKind rep_kind = RepKind::Majorana;
  SymmetryGroup group = SymmetryGroup::Rotations;
  SpinorClass spinor_class = SpinorClass::Generic;
  int span_rank = 0;
  int class_dimension = 7;  // real dimension of the class modulo phase
  Verdict verdict = Verdict::Incomplete;
  std::vector<std::string> recoverable_slots;  // gamma_basis labels
  std::vector<double> singular_values;
};

/// Rank of the Jacobian of psi -> {w_k(Lambda psi)} over a group sample, with
/// the phase direction projected out, at `base_points` random points of the
/// class (maximum taken). Weyl: psi = (xi, 0) in the chiral basis, other reps
/// see its image. Complete iff the rank equals the class dimension. A
/// covariant is recoverable when its gradient lies in the row space.
FeasibilityReport representation_feasibility(RepKind kind, SymmetryGroup group,
                                             SpinorClass cls = SpinorClass::Generic, std::uint64_t seed = 1,
                                             int base_points = 3, int group_elements = 24);

struct AmbiguityReport {
  bool found = false;
  DiracSpinor psi;
  DiracSpinor partner;
  double distance = 0.0;  // phase_distance(partner, psi)
  double marginal_residual = 0.0;  // max marginal mismatch over the frames
  std::string seed_strategy;
  int frames = 0;
};

/// Looks for psi' with phase_distance(psi', psi) > 0.1 whose marginals agree
/// with psi's (< 1e-9) on a group sample: seeds are the opposite-sign Fierz
/// completion and relative phases between the upper and lower component
/// pairs, refined by Levenberg-Marquardt on the marginal mismatch. Weyl
/// inputs are searched within the Weyl class.
AmbiguityReport ambiguity_probe(const DiracSpinor& psi, RepKind kind, SymmetryGroup group,
                                SpinorClass cls = SpinorClass::Generic, std::uint64_t seed = 1,
                                int group_elements = 24);

}  // namespace diractomo
