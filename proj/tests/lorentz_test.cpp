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

#include "diractomo/lorentz.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numbers>

#include "diractomo/error.hpp"
#include "test_support.hpp"

using namespace diractomo;
using namespace testing_support;

namespace {

constexpr double kPi = std::numbers::pi;
const RepKind kNamed[] = {RepKind::Majorana, RepKind::Standard, RepKind::Chiral};

Vector3r random_axis(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Vector3r(n(rng), n(rng), n(rng)).normalized();
}

LorentzFrame random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  return rotation(random_axis(rng), angle(rng));
}

LorentzFrame random_boost(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> chi(0.05, 2.0);
  return boost(random_axis(rng), chi(rng));
}

BilinearSet random_bilinears(std::mt19937_64& rng) {
  return bilinears(random_spinor(rng), named_representation(RepKind::Standard));
}

// Lower-index covariants of a transformed set.
Vector4r J_lower(const BilinearSet& b) { return b.current_lower(); }
double S_lower(const BilinearSet& b, int mu, int nu) { return b.tensor_lower()(mu, nu); }

TEST(Lorentz, StepIdentitiesFixTheRotationSense) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const BilinearSet b = random_bilinears(rng);
    const BilinearSet bx = transform_bilinears(b, frame_rx());
    const BilinearSet by = transform_bilinears(b, frame_ry());
    const BilinearSet bz = transform_bilinears(b, frame_rz());
    EXPECT_NEAR(J_lower(b)[3], J_lower(bx)[2], 1e-14);
    EXPECT_NEAR(J_lower(b)[1], -J_lower(bz)[2], 1e-14);
    EXPECT_NEAR(S_lower(b, 3, 1), -S_lower(bx, 1, 2), 1e-14);
    EXPECT_NEAR(S_lower(b, 0, 3), -S_lower(by, 0, 1), 1e-14);
    EXPECT_NEAR(S_lower(b, 0, 2), S_lower(bz, 0, 1), 1e-14);
    EXPECT_NEAR(S_lower(b, 2, 3), S_lower(by, 1, 2), 1e-14);
  }
}

TEST(Lorentz, RotationMatrices) {
  EXPECT_EQ(rotation(Vector3r::UnitX(), 0.0).lambda, Matrix4r::Identity());
  const double a = 0.7;
  Matrix4r expected = Matrix4r::Identity();
  // Axes turned by +a about x: components transform with the transpose.
  expected(2, 2) = std::cos(a);
  expected(2, 3) = std::sin(a);
  expected(3, 2) = -std::sin(a);
  expected(3, 3) = std::cos(a);
  EXPECT_LT((rotation(Vector3r::UnitX(), a).lambda - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(rotation(Vector3r(1, 1, 0), 0.3), Error);
  EXPECT_THROW(boost(Vector3r(0, 0, 2), 0.3), Error);
}

TEST(Lorentz, BoostMatrices) {
  EXPECT_EQ(boost(Vector3r::UnitZ(), 0.0).lambda, Matrix4r::Identity());
  const LorentzFrame b = boost(Vector3r::UnitZ(), 1.0);
  EXPECT_NEAR(b.lambda(0, 0), std::cosh(1.0), 1e-15);
  EXPECT_NEAR(b.lambda(0, 3), -std::sinh(1.0), 1e-15);
  EXPECT_TRUE(is_restricted(b.lambda));
  const Matrix4r sum = boost(Vector3r::UnitZ(), 0.3).lambda * boost(Vector3r::UnitZ(), 0.5).lambda;
  EXPECT_LT((sum - boost(Vector3r::UnitZ(), 0.8).lambda).cwiseAbs().maxCoeff(), 1e-14);
  Matrix4r parity = -Matrix4r::Identity();
  parity(0, 0) = 1;
  EXPECT_FALSE(is_restricted(parity));
  EXPECT_FALSE(is_restricted(-Matrix4r::Identity()));
}

TEST(Lorentz, FullTurnLiftsToMinusIdentity) {
  std::mt19937_64 rng(2);
  for (RepKind kind : kNamed) {
    const GammaRep& rep = named_representation(kind);
    for (int i = 0; i < 5; ++i) {
      const LorentzFrame turn = rotation(random_axis(rng), 2 * kPi);
      EXPECT_LT(max_abs(spinor_lift(turn, rep).L + Matrix4c::Identity()), 1e-13);
    }
    EXPECT_LT(max_abs(spinor_lift(identity_frame(), rep).L - Matrix4c::Identity()), 1e-15);
  }
}

TEST(Lorentz, LiftAgreesWithSeriesExponential) {
  // L = exp(Sigma) with Sigma = X_{ab} gamma^a gamma^b / 4, evaluated by the test series.
  std::mt19937_64 rng(3);
  for (RepKind kind : kNamed) {
    const GammaRep& rep = named_representation(kind);
    for (const LorentzFrame& f : {random_rotation(rng), random_boost(rng)}) {
      ASSERT_EQ(f.generators.size(), 1u);
      const Matrix4r lowered = metric() * f.generators[0];
      Matrix4c sigma = Matrix4c::Zero();
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) sigma += 0.25 * lowered(a, b) * rep.upper(a) * rep.upper(b);
      EXPECT_LT(max_abs(spinor_lift(f, rep).L - taylor_exp(sigma)), 1e-13);
    }
  }
}

TEST(Lorentz, StandardZRotationIsBlockDiagonal) {
  const Matrix4c L = spinor_lift(rotation(Vector3r::UnitZ(), 0.9), named_representation(RepKind::Standard)).L;
  EXPECT_LT(L.topRightCorner(2, 2).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(L.bottomLeftCorner(2, 2).cwiseAbs().maxCoeff(), 1e-15);
  // Both 2x2 blocks carry the same spin-1/2 rotation.
  EXPECT_LT((L.topLeftCorner(2, 2) - L.bottomRightCorner(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(std::abs(L(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(L(0, 1)), 0.0, 1e-15);
}

TEST(Lorentz, LiftsIntertwineAndHaveTheRightUnitarity) {
  std::mt19937_64 rng(4);
  for (RepKind kind : kNamed) {
    const GammaRep& rep = named_representation(kind);
    for (int i = 0; i < 100; ++i) {
      const SpinorLift r = spinor_lift(random_rotation(rng), rep);
      EXPECT_LT(lift_check(r, rep), 1e-11);
      EXPECT_LT(max_abs(r.L.adjoint() * r.L - Matrix4c::Identity()), 1e-11);

      const SpinorLift b = spinor_lift(random_boost(rng), rep);
      EXPECT_LT(lift_check(b, rep), 1e-11);
      EXPECT_LT(max_abs(dirac_bar(b.L, rep) * b.L - Matrix4c::Identity()), 1e-11);
    }
    const SpinorLift b1 = spinor_lift(boost(Vector3r::UnitX(), 1.0), rep);
    EXPECT_GT(max_abs(b1.L.adjoint() * b1.L - Matrix4c::Identity()), 0.1);
  }
}

TEST(Lorentz, LiftCheckDetectsMismatch) {
  const GammaRep& rep = named_representation(RepKind::Majorana);
  EXPECT_GT(lift_check(Matrix4c::Identity(), frame_rx().lambda, rep), 0.5);
  const Matrix4c L = spinor_lift(frame_rx(), rep).L;
  EXPECT_LT(lift_check(Matrix4c(-L), frame_rx().lambda, rep), 1e-14);
  EXPECT_THROW(lift_check(Matrix4c::Zero(), frame_rx().lambda, rep), Error);
}

TEST(Lorentz, LiftFromLambdaIsAHomomorphismUpToSign) {
  std::mt19937_64 rng(5);
  for (RepKind kind : kNamed) {
    const GammaRep& rep = named_representation(kind);
    for (int i = 0; i < 20; ++i) {
      const Matrix4r a = random_rotation(rng).lambda * random_boost(rng).lambda;
      const Matrix4r b = random_boost(rng).lambda * random_rotation(rng).lambda;
      const Matrix4c la = lift_from_lambda(a, rep), lb = lift_from_lambda(b, rep);
      const Matrix4c lab = lift_from_lambda(a * b, rep);
      EXPECT_LT(lift_check(la, a, rep), 1e-11);
      EXPECT_LT(std::min(max_abs(lab - la * lb), max_abs(lab + la * lb)), 1e-10);
      EXPECT_NEAR(std::abs(lab.determinant() - 1.0), 0.0, 1e-10);
      if (kind == RepKind::Majorana) EXPECT_LT(lab.imag().cwiseAbs().maxCoeff(), 1e-11);
    }
  }
}

TEST(Lorentz, GeneratorLiftAndDirectSolveAgree) {
  std::mt19937_64 rng(6);
  for (RepKind kind : kNamed) {
    const GammaRep& rep = named_representation(kind);
    const LorentzFrame f = compose(random_boost(rng), random_rotation(rng), "f");
    const Matrix4c a = spinor_lift(f, rep).L;
    const Matrix4c b = spinor_lift(frame_from_matrix(f.lambda, "raw"), rep).L;
    EXPECT_LT(std::min(max_abs(a - b), max_abs(a + b)), 1e-11);
  }
}

TEST(Lorentz, BilinearsTransformCovariantly) {
  std::mt19937_64 rng(7);
  for (RepKind kind : kNamed) {
    const GammaRep& rep = named_representation(kind);
    for (int i = 0; i < 20; ++i) {
      const LorentzFrame f = i % 2 ? random_rotation(rng) : compose(random_boost(rng), random_rotation(rng), "f");
      const DiracSpinor psi = random_spinor(rng);
      const auto moved = bilinears(spinor_lift(f, rep).L * psi, rep).as_vector();
      const auto expected = transform_bilinears(bilinears(psi, rep), f).as_vector();
      EXPECT_LT((moved - expected).cwiseAbs().maxCoeff(), 1e-11 * (1 + expected.cwiseAbs().maxCoeff()));
    }
  }
  const BilinearSet b = random_bilinears(rng);
  EXPECT_EQ(transform_bilinears(b, identity_frame()).as_vector(), b.as_vector());
}

TEST(Lorentz, ExpGeneratorMatchesSeries) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n;
  for (int i = 0; i < 50; ++i) {
    Matrix4r a = Matrix4r::Zero();
    for (int r = 0; r < 4; ++r)
      for (int c = r + 1; c < 4; ++c) {
        a(r, c) = n(rng);
        a(c, r) = -a(r, c);
      }
    const Matrix4r x = metric() * a;  // X^T g + g X = 0
    const Matrix4r e = exp_generator(x);
    EXPECT_LT((e - taylor_exp(x)).cwiseAbs().maxCoeff(), 1e-11 * e.cwiseAbs().maxCoeff());
    EXPECT_LT(metric_defect(e), 1e-10 * e.squaredNorm());
  }
  EXPECT_EQ(exp_generator(Matrix4r::Zero()), Matrix4r::Identity());
}

TEST(Lorentz, FrameLabelsRoundTrip) {
  std::mt19937_64 rng(9);
  std::vector<LorentzFrame> frames = {identity_frame(), frame_rx(), frame_ry(), frame_rz(),
                                      random_rotation(rng), random_boost(rng), direction_frame(0.4, 1.1),
                                      direction_frame(0.4, 1.1, 1), direction_frame(2.0, 5.0, 2)};
  for (const LorentzFrame& f : frames) {
    const LorentzFrame parsed = parse_frame(f.label);
    EXPECT_LT((parsed.lambda - f.lambda).cwiseAbs().maxCoeff(), 1e-14) << f.label;
    EXPECT_EQ(parsed.label, f.label);
  }
  EXPECT_LT((parse_frame("Rx").lambda - rotation(Vector3r::UnitX(), kPi / 2).lambda).cwiseAbs().maxCoeff(), 1e-15);
  for (const char* bad : {"", "Rw", "rot(1,0,0)", "rot(1,0;0.3)", "boost(0,0,1;x)", "dir(1)", "dir(1,2;4)",
                          "rot(1,0,0;0.3)junk"}) {
    EXPECT_THROW(parse_frame(bad), Error) << bad;
  }
  try {
    parse_frame("rot(1,1,0;0.3)");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadAxis);
  }
}

TEST(Lorentz, DirectionFramePutsReadoutAxisOnDirection) {
  for (int axis = 1; axis <= 3; ++axis) {
    const LorentzFrame f = direction_frame(0.8, 2.3, axis);
    const Matrix3r r = f.lambda.bottomRightCorner(3, 3);
    EXPECT_LT((r.transpose().col(axis - 1) - unit_direction(0.8, 2.3)).norm(), 1e-15);
    EXPECT_TRUE(is_restricted(f.lambda));
  }
}

TEST(Lorentz, ParityIsNotConnected) {
  Matrix4r parity = -Matrix4r::Identity();
  parity(0, 0) = 1;
  try {
    spinor_lift(frame_from_matrix(parity, "P"), named_representation(RepKind::Standard));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotConnected);
  }
}

TEST(Lorentz, GaussLegendreMoments) {
  std::vector<double> x, w;
  gauss_legendre(7, x, w);
  ASSERT_EQ(x.size(), 7u);
  for (int k = 0; k < 14; ++k) {
    double sum = 0;
    for (int i = 0; i < 7; ++i) sum += w[i] * std::pow(x[i], k);
    EXPECT_NEAR(sum, k % 2 ? 0.0 : 2.0 / (k + 1), 1e-14) << k;
  }
  EXPECT_TRUE(std::is_sorted(x.begin(), x.end()));
}

TEST(Lorentz, QuadratureWeightsCoverTheSphere) {
  const auto nodes = quadrature_nodes({8, 16});
  ASSERT_EQ(nodes.size(), 128u);
  double area = 0;
  for (const auto& n : nodes) area += n.weight;
  EXPECT_NEAR(area, 4 * kPi, 1e-13);
  EXPECT_LE(nodes[0].theta, nodes[16].theta);
}

std::vector<DirectionSample> sample(const QuadratureScheme& q, const std::function<double(double, double)>& nu) {
  std::vector<DirectionSample> out;
  for (const auto& n : quadrature_nodes(q)) out.push_back({n.theta, n.phi, nu(n.theta, n.phi)});
  return out;
}

TEST(Lorentz, KernelReconstructsVectors) {
  // Gauss-Legendre runs in theta itself, so sin^2 theta is only integrated
  // approximately; the default grid is accurate to rounding.
  const QuadratureScheme q;
  std::mt19937_64 rng(10);
  std::normal_distribution<double> n;
  for (int i = 0; i < 20; ++i) {
    const Vector3r v(n(rng), n(rng), n(rng));
    const auto s = sample(q, [&](double t, double p) { return v.dot(unit_direction(t, p)); });
    EXPECT_LT((kernel_vector_recon(s, q) - v).norm(), 1e-10);
  }
  const auto flat = sample(q, [](double, double) { return 0.25; });
  EXPECT_LT(kernel_vector_recon(flat, q).norm(), 1e-15);
  // The cartesian shortcut.
  EXPECT_EQ(discrete_vector_recon(1, 2, 3), Vector3r(1, 2, 3));
  EXPECT_NEAR(reconstruction_kernel(0, 0).z(), 3 / (4 * kPi), 1e-16);
  EXPECT_NEAR(reconstruction_kernel(1, 0).x(), 2 / (kPi * kPi), 1e-16);
}

TEST(Lorentz, KernelRejectsIncompleteGrids) {
  const QuadratureScheme q{4, 8};
  auto s = sample(q, [](double, double) { return 1.0; });
  std::reverse(s.begin(), s.end());
  EXPECT_NO_THROW(kernel_vector_recon(s, q));
  auto missing = s;
  missing.pop_back();
  EXPECT_THROW(kernel_vector_recon(missing, q), Error);
  auto duplicated = s;
  duplicated.back() = duplicated.front();
  try {
    kernel_vector_recon(duplicated, q);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
  EXPECT_THROW(kernel_vector_recon(sample({4, 6}, [](double, double) { return 1.0; }), q), Error);
}

}  // namespace
