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
#include <optional>
#include <random>

#include "diractomo/clifford.hpp"
#include "diractomo/types.hpp"

namespace diractomo {

/// Four complex amplitudes psi_1..psi_4 describing the internal state of a
/// Dirac particle in a given gamma representation.
class DiracSpinor {
 public:
  DiracSpinor() : components_(Vector4c::Zero()) {}
  explicit DiracSpinor(const Vector4c& components) : components_(components) {}
  DiracSpinor(Complex a, Complex b, Complex c, Complex d) : components_(a, b, c, d) {}

  /// Unit vector e_{k+1}, k = 0..3.
  static DiracSpinor basis(int k);

  const Vector4c& components() const { return components_; }
  Complex operator[](int i) const { return components_[i]; }

  /// psi^dagger psi
  double norm_squared() const { return components_.squaredNorm(); }
  bool is_normalized(double tolerance = 1e-12) const;
  bool is_finite() const { return components_.allFinite(); }
  DiracSpinor normalized() const;

  DiracSpinor with_phase(double alpha) const;
  /// Multiplies by the phase making the first largest-magnitude component
  /// real and positive.
  DiracSpinor canonical_phase() const;

 private:
  Vector4c components_;
};

inline DiracSpinor operator*(const Matrix4c& m, const DiracSpinor& psi) {
  return DiracSpinor(Vector4c(m * psi.components()));
}

/// Haar-uniform point of the unit 7-sphere: eight standard normals, normalized.
DiracSpinor random_spinor(std::mt19937_64& rng);

/// The 16 real bilinear covariants. Tensor components are stored with upper
/// indices in the slot order 01, 02, 03, 12, 23, 31.
struct BilinearSet {
  double omega1 = 0.0;
  std::array<double, 4> J{};
  std::array<double, 6> S{};
  std::array<double, 4> K{};
  double omega2 = 0.0;

  Vector4r current() const { return Vector4r(J[0], J[1], J[2], J[3]); }
  Vector4r axial_current() const { return Vector4r(K[0], K[1], K[2], K[3]); }
  Vector4r current_lower() const { return metric() * current(); }
  Vector4r axial_current_lower() const { return metric() * axial_current(); }

  /// S^{mu nu} as an antisymmetric 4x4 matrix.
  Matrix4r tensor() const;
  Matrix4r tensor_lower() const { return metric() * tensor() * metric(); }
  /// (*S)_{mu nu} = -1/2 epsilon_{mu nu alpha beta} S^{alpha beta}.
  Matrix4r dual_lower() const;
  void set_tensor(const Matrix4r& upper);
  void set_current(const Vector4r& upper);
  void set_axial_current(const Vector4r& upper);

  /// Slot order of GammaBasis.
  Eigen::Matrix<double, 16, 1> as_vector() const;
  static BilinearSet from_vector(const Eigen::Matrix<double, 16, 1>& v);
};

/// Expectation values <psi-bar| Gamma^a |psi>. Throws
/// Error(NonRealCovariant) if an imaginary part exceeds 1e-9 (relative to
/// the squared norm), which only happens for a broken representation.
BilinearSet bilinears(const DiracSpinor& psi, const GammaRep& rep);

/// Residuals of the Fierz identities: [0] J.J - O1^2 - O2^2,
/// [1] J.J + K.K, [2] J.K, [3..8] the slots 01,02,03,12,23,31 of
/// J_mu K_nu - K_mu J_nu + O2 S_mu nu + O1 epsilon_{mu nu a b} S^{ab} / 2.
std::array<double, 9> fierz_residuals(const BilinearSet& b);

/// rho as an element of the Dirac algebra together with the data fixed by
/// the last reconstruction (anchor spinor and rescaling omega).
struct RhoOperator {
  Matrix4c matrix = Matrix4c::Zero();
  std::optional<DiracSpinor> anchor;
  double scale = 0.0;
};

/// rho = 4 |psi><psi-bar|.
RhoOperator rho_from_spinor(const DiracSpinor& psi, const GammaRep& rep);

/// rho = O1 + J^mu gamma_mu + i S^{mu nu} gamma_{mu nu}/2 + i K^mu gamma_mu gamma_0123
///       + O2 gamma_0123.
RhoOperator rho_from_bilinears(const BilinearSet& b, const GammaRep& rep);

/// <eta-bar| rho |eta>, real for a Dirac-selfadjoint rho.
double anchor_weight(const RhoOperator& rho, const GammaRep& rep, const DiracSpinor& eta);

/// Recovers psi up to a global phase as omega rho |eta> with
/// omega = (4 <eta-bar|rho|eta>)^{-1/2}; the result is returned in canonical
/// phase. Throws Error(DegenerateAnchor) when <eta-bar|rho|eta> <= tau_anchor
/// (1e-10 times the largest entry of rho).
DiracSpinor crawford_reconstruct(const RhoOperator& rho, const GammaRep& rep, const DiracSpinor& eta);

struct CrawfordResult {
  DiracSpinor psi;
  RhoOperator rho;  // with anchor and scale filled in
  int anchor_index = 0;
};

/// Tries the anchors e_1, e_2, e_3, e_4 in order and keeps the first
/// nondegenerate one. Throws Error(DegenerateAnchor) if all four fail.
CrawfordResult crawford_reconstruct_auto(const RhoOperator& rho, const GammaRep& rep);

/// min over alpha of ||a - exp(i alpha) b||.
double phase_distance(const DiracSpinor& a, const DiracSpinor& b);

}  // namespace diractomo
