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

#include "diractomo/clifford.hpp"

#include <gtest/gtest.h>

#include "diractomo/error.hpp"
#include "test_support.hpp"

using namespace diractomo;
using namespace testing_support;

namespace {

const RepKind kNamed[] = {RepKind::Majorana, RepKind::Standard, RepKind::Chiral};

double anticommutator_residual(const std::array<Matrix4c, 4>& g) {
  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      Matrix4c target = Matrix4c::Zero();
      if (mu == nu) target = Matrix4c::Identity() * (mu == 0 ? 2.0 : -2.0);
      worst = std::max(worst, max_abs(g[mu] * g[nu] + g[nu] * g[mu] - target));
    }
  return worst;
}

TEST(Clifford, NamedRepresentationsSatisfyTheAlgebra) {
  for (RepKind kind : kNamed) {
    const GammaRep rep = make_representation(kind);
    EXPECT_LT(rep.clifford_residual(), 1e-12) << to_string(kind);
    EXPECT_LT(anticommutator_residual(rep.gammas()), 1e-12) << to_string(kind);
    EXPECT_LT(rep.hermiticity_residual(), 1e-12) << to_string(kind);
  }
}

TEST(Clifford, StandardMatchesHandWrittenMatrices) {
  const GammaRep rep = make_representation(RepKind::Standard);
  const auto expected = standard_upper();
  for (int mu = 0; mu < 4; ++mu) EXPECT_LT(max_abs(rep.upper(mu) - expected[mu]), 1e-15);
  EXPECT_LT(max_abs(rep.change_of_basis() - Matrix4c::Identity()), 1e-15);
}

TEST(Clifford, MajoranaMatchesLowerIndexBlocks) {
  const GammaRep rep = make_representation(RepKind::Majorana);
  const auto expected = majorana_lower();
  for (int mu = 0; mu < 4; ++mu) {
    EXPECT_LT(max_abs(rep.lower(mu) - expected[mu]), 1e-15) << mu;
    // Majorana: every gamma is purely imaginary.
    EXPECT_LT(rep.upper(mu).real().cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Clifford, ChiralIsTheUnitaryImageOfStandard) {
  const GammaRep rep = make_representation(RepKind::Chiral);
  const Matrix4c u = standard_to_chiral();
  const auto st = standard_upper();
  for (int mu = 0; mu < 4; ++mu) EXPECT_LT(max_abs(rep.upper(mu) - u * st[mu] * u.adjoint()), 1e-15);
  // gamma_0123 is diagonal in the chiral basis.
  Matrix4c offdiag = rep.volume();
  offdiag.diagonal().setZero();
  EXPECT_LT(max_abs(offdiag), 1e-15);
}

TEST(Clifford, ChangeOfBasisRelatesEveryRepToStandard) {
  const auto st = standard_upper();
  for (RepKind kind : kNamed) {
    const GammaRep rep = make_representation(kind);
    const Matrix4c u = rep.change_of_basis();
    EXPECT_LT(max_abs(u.adjoint() * u - Matrix4c::Identity()), 1e-13);
    for (int mu = 0; mu < 4; ++mu) EXPECT_LT(max_abs(u * st[mu] * u.adjoint() - rep.upper(mu)), 1e-13);
  }
}

TEST(Clifford, RandomConjugatesSatisfyTheAlgebra) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const GammaRep rep = conjugate_representation(make_representation(kNamed[i % 3]), random_unitary(rng));
    EXPECT_EQ(rep.kind(), RepKind::Custom);
    EXPECT_LT(rep.clifford_residual(), 1e-12);
    EXPECT_LT(rep.hermiticity_residual(), 1e-12);
  }
}

TEST(Clifford, Errors) {
  EXPECT_THROW(make_representation(RepKind::Custom), Error);
  Matrix4c scaled = 2.0 * Matrix4c::Identity();
  try {
    conjugate_representation(make_representation(RepKind::Standard), scaled);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonUnitary);
  }
  try {
    projector_factorization_check(
        conjugate_representation(make_representation(RepKind::Standard), Matrix4c::Identity()));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedRep);
  }
  EXPECT_THROW(rep_kind_from_string("weyl"), Error);
  for (RepKind kind : kNamed) EXPECT_EQ(rep_kind_from_string(to_string(kind)), kind);
}

TEST(Clifford, IntertwinerRecoversTheConjugation) {
  std::mt19937_64 rng(11);
  const GammaRep st = make_representation(RepKind::Standard);
  for (int i = 0; i < 20; ++i) {
    const Matrix4c u = random_unitary(rng);
    const GammaRep other = conjugate_representation(st, u);
    const Matrix4c x = intertwiner(st.gammas(), other.gammas());
    EXPECT_NEAR(std::abs(x.determinant() - 1.0), 0.0, 1e-12);
    // x is u up to a scalar.
    const Matrix4c ratio = x * u.adjoint();
    EXPECT_LT(max_abs(ratio - ratio(0, 0) * Matrix4c::Identity()), 1e-12);
  }
  auto broken = st.gammas();
  broken[0] *= 2.0;
  try {
    intertwiner(st.gammas(), broken);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Singular);
  }
}

TEST(Clifford, ProjectorFactorizations) {
  for (RepKind kind : kNamed) {
    const FactorizationReport report = projector_factorization_check(make_representation(kind));
    EXPECT_LT(report.max_deviation, 1e-12) << to_string(kind);
  }
  EXPECT_EQ(factorization_signs(RepKind::Chiral, 0), std::make_pair(-1, 1));
  EXPECT_EQ(factorization_signs(RepKind::Majorana, 3), std::make_pair(-1, -1));
}

TEST(Clifford, MajoranaFactorizationByHand) {
  // P_k = (1 + s1 gamma_2 gamma_0)(1 + s2 i gamma_1) / 4 straight from the blocks.
  const auto g = majorana_lower();
  const Matrix4c a = g[2] * g[0], b = kI * g[1];
  const int s[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (int k = 0; k < 4; ++k) {
    const Matrix4c p = 0.25 * (Matrix4c::Identity() + double(s[k][0]) * a) * (Matrix4c::Identity() + double(s[k][1]) * b);
    Matrix4c canonical = Matrix4c::Zero();
    canonical(k, k) = 1.0;
    EXPECT_LT(max_abs(p - canonical), 1e-15) << k;
  }
}

TEST(Clifford, GeneralRepresentationInvolutions) {
  // With u = U^-1 gamma0_st U and sigma = U^-1 gamma_12,st U the standard
  // factorization transported back gives U^-1 P_k U.
  std::mt19937_64 rng(3);
  std::vector<GammaRep> reps = {make_representation(RepKind::Majorana), make_representation(RepKind::Chiral),
                                conjugate_representation(make_representation(RepKind::Standard), random_unitary(rng))};
  for (const GammaRep& rep : reps) {
    const Matrix4c u = rep.change_of_basis();
    for (int k = 0; k < 4; ++k) {
      const auto [s1, s2] = factorization_signs(RepKind::Standard, k);
      const Matrix4c p = 0.25 * (Matrix4c::Identity() + double(s1) * rep.u()) *
                         (Matrix4c::Identity() + double(s2) * kI * rep.sigma());
      Matrix4c canonical = Matrix4c::Zero();
      canonical(k, k) = 1.0;
      EXPECT_LT(max_abs(p - u.adjoint() * canonical * u), 1e-12);
    }
  }
}

TEST(Clifford, GammaBasisIsOrthonormal) {
  for (RepKind kind : kNamed) {
    const GammaRep rep = make_representation(kind);
    const GammaBasis basis = gamma_basis(rep);
    for (int a = 0; a < 16; ++a) {
      // Dirac self-adjoint, so expectation values are real.
      EXPECT_LT(max_abs(dirac_bar(basis.elements[a], rep) - basis.elements[a]), 1e-14) << basis.labels[a];
      for (int b = 0; b < 16; ++b) {
        const Complex ip = trace_inner_product(basis.elements[a], basis.elements[b], rep);
        if (a == b) {
          EXPECT_NEAR(std::abs(ip), 1.0, 1e-14);
        } else {
          EXPECT_NEAR(std::abs(ip), 0.0, 1e-14);
        }
      }
    }
  }
}

TEST(Clifford, MetricAndLeviCivita) {
  EXPECT_EQ(metric().diagonal(), Vector4r(1, -1, -1, -1));
  EXPECT_EQ(levi_civita(0, 1, 2, 3), 1);
  EXPECT_EQ(levi_civita(1, 0, 2, 3), -1);
  EXPECT_EQ(levi_civita(1, 2, 3, 0), -1);
  EXPECT_EQ(levi_civita(0, 0, 2, 3), 0);
  const GammaRep rep = make_representation(RepKind::Standard);
  EXPECT_LT(max_abs(rep.volume() - rep.lower(0) * rep.lower(1) * rep.lower(2) * rep.lower(3)), 1e-15);
  EXPECT_LT(max_abs(rep.volume() * rep.volume() + Matrix4c::Identity()), 1e-15);
}

}  // namespace
