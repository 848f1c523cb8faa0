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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diractomo/clifford.hpp"
#include "diractomo/spinor.hpp"
#include "diractomo/types.hpp"

namespace diractomo {

/// A restricted Lorentz transformation Lambda^mu_nu, stored together with the
/// ordered Lie-algebra generators X_i it was built from
/// (Lambda = exp(X_1) exp(X_2) ...). Frames built from a bare matrix have no
/// generators; their spin lift is solved for directly.
///
/// Rotations are frame rotations: rotation(n, a) gives the components of a
/// vector in axes turned by +a (right-handed) about n, so its spatial block is
/// the active rotation by -a. Boosts follow the same passive convention,
/// Lambda^0_k = -sinh(chi) d_k.
struct LorentzFrame {
  Matrix4r lambda = Matrix4r::Identity();
  std::string label = "I";
  std::vector<Matrix4r> generators;
};

LorentzFrame identity_frame();
/// Throws Error(BadAxis) unless |axis| = 1 within 1e-12.
LorentzFrame rotation(const Vector3r& axis, double angle);
LorentzFrame rotation(const Vector3r& axis, double angle, std::string label);
/// Throws Error(BadAxis) unless |direction| = 1 within 1e-12.
LorentzFrame boost(const Vector3r& direction, double rapidity);
/// outer * inner: inner acts first.
LorentzFrame compose(const LorentzFrame& outer, const LorentzFrame& inner, std::string label);
LorentzFrame frame_from_matrix(const Matrix4r& lambda, std::string label);

/// The pi/2 frame rotations of the discrete protocol.
LorentzFrame frame_rx();
LorentzFrame frame_ry();
LorentzFrame frame_rz();

/// e3'(theta, phi) = (sin t cos p, sin t sin p, cos t).
Vector3r unit_direction(double theta, double phi);

/// Frame whose readout axis `axis` (1, 2 or 3) lies along e3'(theta, phi):
/// the spatial block R satisfies R^T e_axis = e3'(theta, phi). Built as
/// Q_axis * rotation(y, theta) * rotation(z, phi) with Q_3 = I,
/// Q_2 = rotation(x, pi/2), Q_1 = rotation(y, -pi/2).
LorentzFrame direction_frame(double theta, double phi, int axis = 3);

/// Parses "I", "Rx", "Ry", "Rz", "rot(ax,ay,az;angle)", "boost(bx,by,bz;chi)",
/// "dir(theta,phi)" and "dir(theta,phi;axis)". Throws Error(ParseError).
LorentzFrame parse_frame(std::string_view label);

/// max entry of |Lambda^T g Lambda - g|.
double metric_defect(const Matrix4r& lambda);
/// Lambda^T g Lambda = g within 1e-12, det = +1 and Lambda^0_0 >= 1 - 1e-12.
bool is_restricted(const Matrix4r& lambda);

/// exp(X) for a 4x4 generator; closed form when X^3 is a multiple of X.
Matrix4r exp_generator(const Matrix4r& x);

struct SpinorLift {
  Matrix4c L = Matrix4c::Identity();
  LorentzFrame frame;
  RepKind rep_kind = RepKind::Standard;
};

/// L = exp(Sigma_1) exp(Sigma_2) ... with Sigma = X_{ab} gamma^a gamma^b / 4,
/// so that L^{-1} gamma^mu L = Lambda^mu_nu gamma^nu. Throws
/// Error(NotConnected) for frames outside the restricted group.
SpinorLift spinor_lift(const LorentzFrame& frame, const GammaRep& rep);

/// Solves L^{-1} gamma^mu L = Lambda^mu_nu gamma^nu directly. The overall
/// scalar is fixed up to sign: det L = 1 and L real in the Majorana basis.
Matrix4c lift_from_lambda(const Matrix4r& lambda, const GammaRep& rep);

/// max over mu of the largest entry of L^{-1} gamma^mu L - Lambda^mu_nu gamma^nu.
/// Throws Error(Singular) if L is not invertible.
double lift_check(const SpinorLift& lift, const GammaRep& rep);
double lift_check(const Matrix4c& lift, const Matrix4r& lambda, const GammaRep& rep);

/// Tensor transformation: scalars fixed, J and K with one Lambda, S with two.
BilinearSet transform_bilinears(const BilinearSet& b, const LorentzFrame& frame);
BilinearSet transform_bilinears(const BilinearSet& b, const Matrix4r& lambda);

/// nu(pi/2, 0), nu(pi/2, pi/2) and nu(0, 0) are the three Cartesian components.
Vector3r discrete_vector_recon(double nu_x, double nu_y, double nu_z);

struct DirectionSample {
  double theta = 0.0;
  double phi = 0.0;
  double nu = 0.0;
};

/// Product rule on the sphere: Gauss-Legendre in theta on [0, pi] and the
/// periodic trapezoid rule in phi.
struct QuadratureScheme {
  int n_theta = 32;
  int n_phi = 64;
};

struct QuadratureNode {
  double theta;
  double phi;
  double weight;  // includes the sin(theta) of the solid-angle element
};

/// Nodes ordered theta-major.
std::vector<QuadratureNode> quadrature_nodes(const QuadratureScheme& scheme);

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// A(theta, phi) = (2/pi^2 cos phi, 2/pi^2 sin phi, 3/(4 pi) cos theta).
Vector3r reconstruction_kernel(double theta, double phi);

/// v = integral over the sphere of A(theta, phi) nu(theta, phi). Samples must
/// cover every node of the scheme exactly once (any order), otherwise
/// Error(GridMismatch).
Vector3r kernel_vector_recon(std::span<const DirectionSample> samples, const QuadratureScheme& scheme);

}  // namespace diractomo
