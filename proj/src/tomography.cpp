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

#include "diractomo/tomography.hpp"

#include <cmath>
#include <numbers>

#include "diractomo/error.hpp"
#include "diractomo/random.hpp"

namespace diractomo {

ProjectorSet projectors() {
  ProjectorSet set;
  for (int k = 0; k < 4; ++k) {
    set.P[k] = Matrix4c::Zero();
    set.P[k](k, k) = 1.0;
  }
  return set;
}

MarginalRecord marginals(const DiracSpinor& psi, const SpinorLift& lift) {
  const Vector4c moved = lift.L * psi.components();
  MarginalRecord record;
  record.frame = lift.frame.label;
  for (int k = 0; k < 4; ++k) record.w[k] = std::norm(moved[k]);
  return record;
}

MarginalRecord marginals(const DiracSpinor& psi, const LorentzFrame& frame, const GammaRep& rep) {
  return marginals(psi, spinor_lift(frame, rep));
}

std::array<double, 4> marginals_projector_path(const DiracSpinor& psi, const SpinorLift& lift, const GammaRep& rep) {
  const Matrix4c inv = lift.L.inverse();
  const Matrix4c g0 = rep.lower(0);
  const Eigen::RowVector4cd bar = psi.components().adjoint() * g0;
  const ProjectorSet p = projectors();
  std::array<double, 4> w{};
  // The bar of the lifted spinor is psi-bar L^{-1}; gamma_0 P_k carries the
  // plain inner product back in (gamma_0 squares to one).
  for (int k = 0; k < 4; ++k) w[k] = (bar * inv * g0 * p.P[k] * lift.L * psi.components())(0).real();
  return w;
}

std::array<double, 4> marginal_formula(const BilinearSet& b, RepKind kind) {
  const Vector4r j = b.current_lower();
  const Vector4r kx = b.axial_current_lower();
  const Matrix4r s = b.tensor_lower();
  std::array<double, 4> w{};
  for (int k = 0; k < 4; ++k) {
    const auto [s1, s2] = factorization_signs(kind, k);
    double value = 0.0;
    switch (kind) {
      case RepKind::Majorana:
        value = j[0] - s1 * j[2] + s2 * s(0, 1) + s1 * s2 * s(1, 2);
        break;
      case RepKind::Standard:
        value = s1 * b.omega1 + j[0] + s1 * s2 * s(1, 2) - s2 * kx[3];
        break;
      case RepKind::Chiral:
        value = j[0] - s1 * j[3] - s2 * kx[0] + s1 * s2 * kx[3];
        break;
      case RepKind::Custom:
        throw Error(ErrorCode::UnsupportedRep, "no marginal formula for a custom representation");
    }
    w[k] = 0.25 * value;
  }
  return w;
}

Eigen::Matrix<double, 4, 16> marginal_formula_matrix(RepKind kind) {
  Eigen::Matrix<double, 4, 16> m;
  for (int c = 0; c < 16; ++c) {
    Eigen::Matrix<double, 16, 1> unit = Eigen::Matrix<double, 16, 1>::Unit(c);
    const auto w = marginal_formula(BilinearSet::from_vector(unit), kind);
    for (int k = 0; k < 4; ++k) m(k, c) = w[k];
  }
  return m;
}

double marginal_formula_check(const DiracSpinor& psi, const LorentzFrame& frame, RepKind kind) {
  const GammaRep& rep = named_representation(kind);
  const auto formula = marginal_formula(transform_bilinears(bilinears(psi, rep), frame), kind);
  const MarginalRecord direct = marginals(psi, frame, rep);
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(formula[k] - direct.w[k]));
  return worst;
}

MarginalRecord sample_shots(const MarginalRecord& exact, std::int64_t shots, std::uint64_t seed, std::uint64_t trial,
                            std::string_view stream) {
  if (shots < 1) throw Error(ErrorCode::InconsistentInput, "shots must be at least 1");
  double total = 0.0;
  for (double w : exact.w) {
    if (w < -1e-12) throw Error(ErrorCode::NegativeWeight, "marginal weight " + std::to_string(w) + " is negative");
    total += std::max(w, 0.0);
  }
  if (!(total > 0.0)) throw Error(ErrorCode::InconsistentInput, "marginal distribution is zero");

  std::mt19937_64 engine = keyed_engine(seed, std::string(stream) + exact.frame, trial);
  MarginalRecord out;
  out.frame = exact.frame;
  out.shots = shots;
  // Multinomial as a chain of conditional binomials.
  std::int64_t remaining = shots;
  double mass = total;
  for (int k = 0; k < 4; ++k) {
    const double w = std::max(exact.w[k], 0.0);
    std::int64_t count = 0;
    if (k == 3 || w >= mass) {
      count = remaining;
    } else if (remaining > 0 && w > 0.0) {
      std::binomial_distribution<std::int64_t> draw(remaining, w / mass);
      count = draw(engine);
    }
    out.w[k] = static_cast<double>(count) / static_cast<double>(shots);
    remaining -= count;
    mass -= w;
  }
  return out;
}

std::string_view to_string(Protocol::Kind kind) {
  switch (kind) {
    case Protocol::Kind::DiscreteMajorana: return "discrete-majorana";
    case Protocol::Kind::CombinedStChiral: return "combined-st-chiral";
    case Protocol::Kind::ContinuousGrid: return "continuous-grid";
  }
  return "?";
}

Protocol::Kind protocol_kind_from_string(std::string_view name) {
  for (auto kind : {Protocol::Kind::DiscreteMajorana, Protocol::Kind::CombinedStChiral, Protocol::Kind::ContinuousGrid}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorCode::ParseError, "unknown protocol '" + std::string(name) + "'");
}

std::vector<RepKind> protocol_reps(const Protocol& protocol) {
  if (protocol.kind == Protocol::Kind::CombinedStChiral) return {RepKind::Standard, RepKind::Chiral};
  return {RepKind::Majorana};
}

RepKind reference_rep(const Protocol& protocol) { return protocol_reps(protocol).front(); }

std::vector<LorentzFrame> frame_set(const Protocol& protocol) {
  if (protocol.kind != Protocol::Kind::ContinuousGrid) return {identity_frame(), frame_rx(), frame_ry(), frame_rz()};
  if (protocol.grid.n_theta < 2 || protocol.grid.n_phi < 2) {
    throw Error(ErrorCode::GridMismatch, "grid dimensions must be at least 2");
  }
  std::vector<LorentzFrame> frames;
  const auto nodes = quadrature_nodes(protocol.grid);
  frames.reserve(3 * nodes.size());
  for (const QuadratureNode& node : nodes) {
    for (int axis = 1; axis <= 3; ++axis) frames.push_back(direction_frame(node.theta, node.phi, axis));
  }
  return frames;
}

}  // namespace diractomo
