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
#include <string_view>
#include <utility>

#include "diractomo/types.hpp"

namespace diractomo {

enum class RepKind { Majorana, Standard, Chiral, Custom };

std::string_view to_string(RepKind kind);
/// Parses the lowercase names produced by to_string. Throws Error(ParseError).
RepKind rep_kind_from_string(std::string_view name);

/// Minkowski metric g = diag(+1, -1, -1, -1).
const Matrix4r& metric();
inline double metric_sign(int mu) { return mu == 0 ? 1.0 : -1.0; }

/// Levi-Civita symbol with lower indices, epsilon_{0123} = +1.
int levi_civita(int a, int b, int c, int d);

/// A set of Dirac matrices gamma^mu (upper index) satisfying
/// {gamma^mu, gamma^nu} = 2 g^{mu nu}, gamma^0 hermitian, gamma^k antihermitian.
///
/// Every representation remembers the unitary U relating it to the standard
/// one, gamma^mu = U gamma^mu_st U^{-1}. The derived matrices u = U^{-1}
/// gamma^0_st U and sigma = U^{-1} gamma_{12,st} U are kept for the
/// general-representation analysis.
class GammaRep {
 public:
  RepKind kind() const { return kind_; }

  const Matrix4c& upper(int mu) const { return upper_[mu]; }
  Matrix4c lower(int mu) const { return metric_sign(mu) * upper_[mu]; }
  const std::array<Matrix4c, 4>& gammas() const { return upper_; }

  /// gamma^{mu nu} = (gamma^mu gamma^nu - gamma^nu gamma^mu) / 2.
  Matrix4c bivector(int mu, int nu) const;
  /// gamma_{0123} = gamma_0 gamma_1 gamma_2 gamma_3 (lower indices).
  const Matrix4c& volume() const { return volume_; }

  const Matrix4c& change_of_basis() const { return change_of_basis_; }
  const Matrix4c& u() const { return u_; }
  const Matrix4c& sigma() const { return sigma_; }

  /// max over mu, nu of the largest entry of {gamma^mu, gamma^nu} - 2 g^{mu nu} I.
  double clifford_residual() const;
  /// Largest deviation from gamma^0 = gamma^0-dagger, gamma^k = -gamma^k-dagger.
  double hermiticity_residual() const;

 private:
  GammaRep(RepKind kind, const std::array<Matrix4c, 4>& upper, const Matrix4c& change_of_basis);

  friend GammaRep make_representation(RepKind kind);
  friend GammaRep conjugate_representation(const GammaRep& base, const Matrix4c& unitary);

  RepKind kind_;
  std::array<Matrix4c, 4> upper_;
  Matrix4c volume_;
  Matrix4c change_of_basis_;
  Matrix4c u_;
  Matrix4c sigma_;
};

/// Builds one of the three named representations. Custom is rejected.
GammaRep make_representation(RepKind kind);
/// Shared instances of the named representations (built once).
const GammaRep& named_representation(RepKind kind);

/// gamma^mu -> U gamma^mu U^{-1}. Throws Error(NonUnitary) when
/// ||U^dagger U - I|| exceeds kAlgebraTolerance.
GammaRep conjugate_representation(const GammaRep& base, const Matrix4c& unitary);

/// Solves X a_mu X^{-1} = b_mu for the four pairs. The solution is unique up
/// to a scalar; it is returned with det X = 1. Throws Error(Singular) when no
/// nondegenerate solution exists.
Matrix4c intertwiner(const std::array<Matrix4c, 4>& a, const std::array<Matrix4c, 4>& b);

/// Re-expresses a spinor written in representation `from` in representation `to`.
Vector4c change_representation(const Vector4c& psi, const GammaRep& from, const GammaRep& to);

/// Dirac conjugate of a matrix, gamma_0 A^dagger gamma_0.
Matrix4c dirac_bar(const Matrix4c& a, const GammaRep& rep);

/// (A, B) = tr(A bar(B)) / 4.
Complex trace_inner_product(const Matrix4c& a, const Matrix4c& b, const GammaRep& rep);

/// The 16 matrices whose expectation values are the bilinear covariants, in
/// the order 1, gamma^mu, i gamma^{01,02,03,12,23,31}, i gamma_{0123} gamma^mu,
/// -gamma_{0123}.
struct GammaBasis {
  std::array<Matrix4c, 16> elements;
  std::array<std::string_view, 16> labels;
};

GammaBasis gamma_basis(const GammaRep& rep);

/// Ordered index pairs for the six independent tensor slots.
inline constexpr std::array<std::pair<int, int>, 6> kBivectorSlots = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}, {3, 1}}};

/// Result of rebuilding the canonical projectors from two commuting
/// involutions of the representation, P_k = (1 + s1 A)/2 (1 + s2 B)/2.
struct FactorizationReport {
  RepKind kind;
  std::array<std::pair<int, int>, 4> signs;  // (s1, s2) used for P_1..P_4
  std::array<double, 4> deviation;           // max entry of |factorized - P_k|
  double max_deviation;
};

/// Majorana: A = gamma_20, B = i gamma_1. Standard: A = gamma_0,
/// B = i gamma_12. Chiral: A = gamma_30, B = i gamma_0123.
/// Throws Error(UnsupportedRep) for Custom.
FactorizationReport projector_factorization_check(const GammaRep& rep);

/// The (s1, s2) sign pair that produces P_k (k = 0..3) for a named representation.
std::pair<int, int> factorization_signs(RepKind kind, int k);

}  // namespace diractomo
