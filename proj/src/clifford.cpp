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

#include <cmath>
#include <string>

#include "diractomo/error.hpp"

namespace diractomo {
namespace {

using Matrix2c = Eigen::Matrix2cd;

const Complex kI(0.0, 1.0);

Matrix2c pauli(int k) {
  Matrix2c s;
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -kI, kI, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

Matrix4c blocks(const Matrix2c& a, const Matrix2c& b, const Matrix2c& c, const Matrix2c& d) {
  Matrix4c m;
  m << a, b, c, d;
  return m;
}

std::array<Matrix4c, 4> standard_gammas() {
  const Matrix2c z = Matrix2c::Zero();
  const Matrix2c one = pauli(0);
  std::array<Matrix4c, 4> g;
  g[0] = blocks(one, z, z, -one);
  for (int k = 1; k <= 3; ++k) g[k] = blocks(z, pauli(k), -pauli(k), z);
  return g;
}

std::array<Matrix4c, 4> chiral_gammas() {
  const Matrix2c z = Matrix2c::Zero();
  const Matrix2c one = pauli(0);
  std::array<Matrix4c, 4> g;
  g[0] = blocks(z, one, one, z);
  for (int k = 1; k <= 3; ++k) g[k] = blocks(z, pauli(k), -pauli(k), z);
  return g;
}

// The Majorana blocks are the lower-index matrices gamma_mu; raising a
// spatial index flips the sign.
std::array<Matrix4c, 4> majorana_gammas() {
  const Matrix2c z = Matrix2c::Zero();
  const Matrix2c s1 = pauli(1), s2 = pauli(2), s3 = pauli(3);
  std::array<Matrix4c, 4> lower;
  lower[0] = blocks(z, s2, s2, z);
  lower[1] = blocks(-kI * s3, z, z, -kI * s3);
  lower[2] = blocks(z, s2, -s2, z);
  lower[3] = blocks(kI * s1, z, z, kI * s1);
  std::array<Matrix4c, 4> upper;
  for (int mu = 0; mu < 4; ++mu) upper[mu] = metric_sign(mu) * lower[mu];
  return upper;
}

// Fixes the free phase of a unitary: the first entry of largest modulus
// (row-major) becomes real positive.
Matrix4c fix_phase(const Matrix4c& m) {
  double best = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) best = std::max(best, std::abs(m(i, j)));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (std::abs(m(i, j)) > best - 1e-12) {
        const Complex phase = std::conj(m(i, j)) / std::abs(m(i, j));
        return m * phase;
      }
    }
  }
  return m;
}

}  // namespace

std::string_view to_string(RepKind kind) {
  switch (kind) {
    case RepKind::Majorana: return "majorana";
    case RepKind::Standard: return "standard";
    case RepKind::Chiral: return "chiral";
    case RepKind::Custom: return "custom";
  }
  return "custom";
}

RepKind rep_kind_from_string(std::string_view name) {
  if (name == "majorana") return RepKind::Majorana;
  if (name == "standard") return RepKind::Standard;
  if (name == "chiral") return RepKind::Chiral;
  if (name == "custom") return RepKind::Custom;
  throw Error(ErrorCode::ParseError, "unknown representation '" + std::string(name) + "'");
}

const Matrix4r& metric() {
  static const Matrix4r g = Vector4r(1.0, -1.0, -1.0, -1.0).asDiagonal();
  return g;
}

int levi_civita(int a, int b, int c, int d) {
  const int idx[4] = {a, b, c, d};
  int sign = 1;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sign = -sign;
    }
  }
  return sign;
}

GammaRep::GammaRep(RepKind kind, const std::array<Matrix4c, 4>& upper,
                   const Matrix4c& change_of_basis)
    : kind_(kind), upper_(upper), change_of_basis_(change_of_basis) {
  volume_ = lower(0) * lower(1) * lower(2) * lower(3);
  const auto st = standard_gammas();
  const Matrix4c u_inv = change_of_basis_.adjoint();
  u_ = u_inv * st[0] * change_of_basis_;
  // gamma_12 = gamma_1 gamma_2 = gamma^1 gamma^2
  sigma_ = u_inv * (st[1] * st[2]) * change_of_basis_;
}

Matrix4c GammaRep::bivector(int mu, int nu) const {
  return 0.5 * (upper_[mu] * upper_[nu] - upper_[nu] * upper_[mu]);
}

double GammaRep::clifford_residual() const {
  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      Matrix4c ac = upper_[mu] * upper_[nu] + upper_[nu] * upper_[mu];
      if (mu == nu) ac -= 2.0 * metric_sign(mu) * Matrix4c::Identity();
      worst = std::max(worst, ac.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double GammaRep::hermiticity_residual() const {
  double worst = (upper_[0] - upper_[0].adjoint()).cwiseAbs().maxCoeff();
  for (int k = 1; k < 4; ++k)
    worst = std::max(worst, (upper_[k] + upper_[k].adjoint()).cwiseAbs().maxCoeff());
  return worst;
}

const GammaRep& named_representation(RepKind kind) {
  static const std::array<GammaRep, 3> reps = {make_representation(RepKind::Majorana),
                                               make_representation(RepKind::Standard),
                                               make_representation(RepKind::Chiral)};
  switch (kind) {
    case RepKind::Majorana: return reps[0];
    case RepKind::Standard: return reps[1];
    case RepKind::Chiral: return reps[2];
    case RepKind::Custom: break;
  }
  throw Error(ErrorCode::UnsupportedRep, "custom representations have no shared instance");
}

GammaRep make_representation(RepKind kind) {
  const auto st = standard_gammas();
  switch (kind) {
    case RepKind::Standard:
      return GammaRep(kind, st, Matrix4c::Identity());
    case RepKind::Majorana: {
      const auto mj = majorana_gammas();
      return GammaRep(kind, mj, fix_phase(intertwiner(st, mj)));
    }
    case RepKind::Chiral: {
      const auto ch = chiral_gammas();
      return GammaRep(kind, ch, fix_phase(intertwiner(st, ch)));
    }
    case RepKind::Custom:
      break;
  }
  throw Error(ErrorCode::UnsupportedRep, "custom representations come from conjugate_representation");
}

GammaRep conjugate_representation(const GammaRep& base, const Matrix4c& unitary) {
  const double defect = (unitary.adjoint() * unitary - Matrix4c::Identity()).cwiseAbs().maxCoeff();
  if (!(defect <= kAlgebraTolerance)) {
    throw Error(ErrorCode::NonUnitary, "||U^dagger U - I|| = " + std::to_string(defect));
  }
  const Matrix4c inv = unitary.adjoint();
  std::array<Matrix4c, 4> g;
  for (int mu = 0; mu < 4; ++mu) g[mu] = unitary * base.upper(mu) * inv;
  return GammaRep(RepKind::Custom, g, unitary * base.change_of_basis());
}

Matrix4c intertwiner(const std::array<Matrix4c, 4>& a, const std::array<Matrix4c, 4>& b) {
  // vec(X a - b X) = (a^T (x) I - I (x) b) vec(X), column-major vec.
  Eigen::Matrix<Complex, 64, 16> system;
  for (int mu = 0; mu < 4; ++mu) {
    for (int col = 0; col < 16; ++col) {
      const int xr = col % 4, xc = col / 4;
      for (int row = 0; row < 16; ++row) {
        const int r = row % 4, c = row / 4;
        Complex v = 0.0;
        if (r == xr) v += a[mu](xc, c);
        if (c == xc) v -= b[mu](r, xr);
        system(16 * mu + row, col) = v;
      }
    }
  }
  Eigen::JacobiSVD<Eigen::Matrix<Complex, 64, 16>> svd(system, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s(15) <= 1e-9 * s(0)) || s(14) <= 1e-6 * s(0)) {
    throw Error(ErrorCode::Singular, "no unique intertwiner between the gamma sets");
  }
  Matrix4c x;
  for (int col = 0; col < 16; ++col) x(col % 4, col / 4) = svd.matrixV()(col, 15);
  const Complex det = x.determinant();
  if (std::abs(det) < 1e-300) throw Error(ErrorCode::Singular, "intertwiner is not invertible");
  return x / std::pow(det, 0.25);
}

Vector4c change_representation(const Vector4c& psi, const GammaRep& from, const GammaRep& to) {
  return to.change_of_basis() * (from.change_of_basis().adjoint() * psi);
}

Matrix4c dirac_bar(const Matrix4c& a, const GammaRep& rep) {
  return rep.upper(0) * a.adjoint() * rep.upper(0);
}

Complex trace_inner_product(const Matrix4c& a, const Matrix4c& b, const GammaRep& rep) {
  return 0.25 * (a * dirac_bar(b, rep)).trace();
}

GammaBasis gamma_basis(const GammaRep& rep) {
  GammaBasis basis;
  basis.labels = {"omega1", "J0",  "J1",  "J2",  "J3",  "S01", "S02", "S03",
                  "S12",    "S23", "S31", "K0",  "K1",  "K2",  "K3",  "omega2"};
  basis.elements[0] = Matrix4c::Identity();
  for (int mu = 0; mu < 4; ++mu) basis.elements[1 + mu] = rep.upper(mu);
  for (int s = 0; s < 6; ++s) {
    const auto [mu, nu] = kBivectorSlots[s];
    basis.elements[5 + s] = kI * rep.bivector(mu, nu);
  }
  for (int mu = 0; mu < 4; ++mu) basis.elements[11 + mu] = kI * rep.volume() * rep.upper(mu);
  basis.elements[15] = -rep.volume();
  return basis;
}

std::pair<int, int> factorization_signs(RepKind kind, int k) {
  static constexpr std::array<std::pair<int, int>, 4> kPlain = {{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  static constexpr std::array<std::pair<int, int>, 4> kChiral = {{{-1, 1}, {1, 1}, {1, -1}, {-1, -1}}};
  if (kind == RepKind::Chiral) return kChiral[k];
  if (kind == RepKind::Custom) throw Error(ErrorCode::UnsupportedRep, "no fixed sign table");
  return kPlain[k];
}

FactorizationReport projector_factorization_check(const GammaRep& rep) {
  Matrix4c first, second;
  switch (rep.kind()) {
    case RepKind::Majorana:
      first = rep.lower(2) * rep.lower(0);
      second = kI * rep.lower(1);
      break;
    case RepKind::Standard:
      first = rep.lower(0);
      second = kI * rep.lower(1) * rep.lower(2);
      break;
    case RepKind::Chiral:
      first = rep.lower(3) * rep.lower(0);
      second = kI * rep.volume();
      break;
    case RepKind::Custom:
      throw Error(ErrorCode::UnsupportedRep, "factorization is tabulated for named representations only");
  }
  const Matrix4c id = Matrix4c::Identity();
  FactorizationReport report{rep.kind(), {}, {}, 0.0};
  for (int k = 0; k < 4; ++k) {
    const auto signs = factorization_signs(rep.kind(), k);
    const Matrix4c p = 0.25 * (id + double(signs.first) * first) * (id + double(signs.second) * second);
    Matrix4c canonical = Matrix4c::Zero();
    canonical(k, k) = 1.0;
    report.signs[k] = signs;
    report.deviation[k] = (p - canonical).cwiseAbs().maxCoeff();
    report.max_deviation = std::max(report.max_deviation, report.deviation[k]);
  }
  return report;
}

}  // namespace diractomo
