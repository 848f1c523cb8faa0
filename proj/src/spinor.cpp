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

#include "diractomo/spinor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diractomo/error.hpp"

namespace diractomo {
namespace {

const Complex kI(0.0, 1.0);

Complex dirac_expectation(const DiracSpinor& psi, const Matrix4c& op, const GammaRep& rep) {
  const Vector4c& v = psi.components();
  return v.dot(rep.upper(0) * op * v);  // dot() conjugates its left argument
}

}  // namespace

DiracSpinor DiracSpinor::basis(int k) {
  Vector4c v = Vector4c::Zero();
  v[k] = 1.0;
  return DiracSpinor(v);
}

bool DiracSpinor::is_normalized(double tolerance) const {
  return std::abs(norm_squared() - 1.0) <= tolerance;
}

DiracSpinor DiracSpinor::normalized() const {
  const double n = components_.norm();
  return n > 0.0 ? DiracSpinor(Vector4c(components_ / n)) : *this;
}

DiracSpinor DiracSpinor::with_phase(double alpha) const {
  return DiracSpinor(Vector4c(components_ * std::polar(1.0, alpha)));
}

DiracSpinor DiracSpinor::canonical_phase() const {
  const double best = components_.cwiseAbs().maxCoeff();
  if (best == 0.0) return *this;
  for (int i = 0; i < 4; ++i) {
    if (std::abs(components_[i]) >= best * (1.0 - 1e-12)) {
      const Complex phase = std::conj(components_[i]) / std::abs(components_[i]);
      return DiracSpinor(Vector4c(components_ * phase));
    }
  }
  return *this;
}

DiracSpinor random_spinor(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector4c v;
  for (int i = 0; i < 4; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[i] = Complex(re, im);
  }
  return DiracSpinor(v).normalized();
}

Matrix4r BilinearSet::tensor() const {
  Matrix4r t = Matrix4r::Zero();
  for (int s = 0; s < 6; ++s) {
    const auto [mu, nu] = kBivectorSlots[s];
    t(mu, nu) = S[s];
    t(nu, mu) = -S[s];
  }
  return t;
}

Matrix4r BilinearSet::dual_lower() const {
  const Matrix4r t = tensor();
  Matrix4r d = Matrix4r::Zero();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) d(mu, nu) -= 0.5 * levi_civita(mu, nu, a, b) * t(a, b);
  return d;
}

void BilinearSet::set_tensor(const Matrix4r& upper) {
  for (int s = 0; s < 6; ++s) {
    const auto [mu, nu] = kBivectorSlots[s];
    S[s] = 0.5 * (upper(mu, nu) - upper(nu, mu));
  }
}

void BilinearSet::set_current(const Vector4r& upper) {
  for (int mu = 0; mu < 4; ++mu) J[mu] = upper[mu];
}

void BilinearSet::set_axial_current(const Vector4r& upper) {
  for (int mu = 0; mu < 4; ++mu) K[mu] = upper[mu];
}

Eigen::Matrix<double, 16, 1> BilinearSet::as_vector() const {
  Eigen::Matrix<double, 16, 1> v;
  v[0] = omega1;
  for (int i = 0; i < 4; ++i) v[1 + i] = J[i];
  for (int i = 0; i < 6; ++i) v[5 + i] = S[i];
  for (int i = 0; i < 4; ++i) v[11 + i] = K[i];
  v[15] = omega2;
  return v;
}

BilinearSet BilinearSet::from_vector(const Eigen::Matrix<double, 16, 1>& v) {
  BilinearSet b;
  b.omega1 = v[0];
  for (int i = 0; i < 4; ++i) b.J[i] = v[1 + i];
  for (int i = 0; i < 6; ++i) b.S[i] = v[5 + i];
  for (int i = 0; i < 4; ++i) b.K[i] = v[11 + i];
  b.omega2 = v[15];
  return b;
}

BilinearSet bilinears(const DiracSpinor& psi, const GammaRep& rep) {
  const GammaBasis basis = gamma_basis(rep);
  const double limit = 1e-9 * std::max(1.0, psi.norm_squared());
  Eigen::Matrix<double, 16, 1> v;
  for (int a = 0; a < 16; ++a) {
    const Complex value = dirac_expectation(psi, basis.elements[a], rep);
    if (std::abs(value.imag()) > limit) {
      throw Error(ErrorCode::NonRealCovariant,
                  std::string(basis.labels[a]) + " has imaginary part " + std::to_string(value.imag()));
    }
    v[a] = value.real();
  }
  return BilinearSet::from_vector(v);
}

std::array<double, 9> fierz_residuals(const BilinearSet& b) {
  const Vector4r j = b.current(), jl = b.current_lower();
  const Vector4r k = b.axial_current(), kl = b.axial_current_lower();
  const Matrix4r t = b.tensor(), tl = b.tensor_lower();
  const double jj = jl.dot(j);
  std::array<double, 9> r{};
  r[0] = jj - b.omega1 * b.omega1 - b.omega2 * b.omega2;
  r[1] = jj + kl.dot(k);
  r[2] = jl.dot(k);
  for (int s = 0; s < 6; ++s) {
    const auto [mu, nu] = kBivectorSlots[s];
    double dual = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c) dual += 0.5 * levi_civita(mu, nu, a, c) * t(a, c);
    r[3 + s] = jl[mu] * kl[nu] - kl[mu] * jl[nu] + b.omega2 * tl(mu, nu) + b.omega1 * dual;
  }
  return r;
}

RhoOperator rho_from_spinor(const DiracSpinor& psi, const GammaRep& rep) {
  const Vector4c& v = psi.components();
  RhoOperator rho;
  rho.matrix = 4.0 * v * (v.adjoint() * rep.upper(0));
  return rho;
}

RhoOperator rho_from_bilinears(const BilinearSet& b, const GammaRep& rep) {
  Matrix4c m = b.omega1 * Matrix4c::Identity();
  Matrix4c slash_k = Matrix4c::Zero();
  for (int mu = 0; mu < 4; ++mu) {
    m += b.J[mu] * rep.lower(mu);
    slash_k += b.K[mu] * rep.lower(mu);
  }
  for (int s = 0; s < 6; ++s) {
    const auto [mu, nu] = kBivectorSlots[s];
    // gamma_{mu nu} = g_mu mu g_nu nu gamma^{mu nu}; both orderings of the
    // pair contribute, cancelling the 1/2.
    m += kI * b.S[s] * metric_sign(mu) * metric_sign(nu) * rep.bivector(mu, nu);
  }
  m += kI * slash_k * rep.volume();
  m += b.omega2 * rep.volume();
  RhoOperator rho;
  rho.matrix = m;
  return rho;
}

double anchor_weight(const RhoOperator& rho, const GammaRep& rep, const DiracSpinor& eta) {
  return dirac_expectation(eta, rho.matrix, rep).real();
}

DiracSpinor crawford_reconstruct(const RhoOperator& rho, const GammaRep& rep, const DiracSpinor& eta) {
  const double weight = anchor_weight(rho, rep, eta);
  const double tau = 1e-10 * rho.matrix.cwiseAbs().maxCoeff();
  if (!(weight > tau)) {
    throw Error(ErrorCode::DegenerateAnchor,
                "<eta-bar|rho|eta> = " + std::to_string(weight) + " is not above " + std::to_string(tau));
  }
  const double omega = 1.0 / std::sqrt(4.0 * weight);
  return DiracSpinor(Vector4c(omega * (rho.matrix * eta.components()))).canonical_phase();
}

CrawfordResult crawford_reconstruct_auto(const RhoOperator& rho, const GammaRep& rep) {
  for (int k = 0; k < 4; ++k) {
    const DiracSpinor eta = DiracSpinor::basis(k);
    try {
      CrawfordResult result{crawford_reconstruct(rho, rep, eta), rho, k};
      result.rho.anchor = eta;
      result.rho.scale = 1.0 / std::sqrt(4.0 * anchor_weight(rho, rep, eta));
      return result;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateAnchor) throw;
    }
  }
  throw Error(ErrorCode::DegenerateAnchor, "all four canonical anchors are degenerate");
}

double phase_distance(const DiracSpinor& a, const DiracSpinor& b) {
  // The minimizing phase is arg <b|a>; evaluating the difference there avoids
  // the cancellation in |a|^2 + |b|^2 - 2|<a|b>| when a ~ b.
  const Complex overlap = b.components().dot(a.components());
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (a.components() - phase * b.components()).norm();
}

}  // namespace diractomo
