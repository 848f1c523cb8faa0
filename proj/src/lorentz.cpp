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

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "diractomo/error.hpp"
#include "diractomo/format.hpp"

namespace diractomo {
namespace {

constexpr double kPi = std::numbers::pi;

Matrix3r cross_matrix(const Vector3r& n) {
  Matrix3r m;
  m << 0.0, -n.z(), n.y(), n.z(), 0.0, -n.x(), -n.y(), n.x(), 0.0;
  return m;
}

void require_unit(const Vector3r& v, const char* what) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::BadAxis, std::string(what) + " must be a unit vector");
  }
}

// exp(S) for S = X_{ab} gamma^a gamma^b / 4; elementary rotations and boosts
// have S^2 proportional to the identity.
Matrix4c exp_spin_generator(const Matrix4c& s) {
  const Matrix4c s2 = s * s;
  const Complex c = s2.trace() / 4.0;
  const double scale = std::max(1.0, s2.cwiseAbs().maxCoeff());
  const bool scalar = (s2 - c * Matrix4c::Identity()).cwiseAbs().maxCoeff() <= 1e-14 * scale &&
                      std::abs(c.imag()) <= 1e-14 * scale;
  if (!scalar) return s.exp();
  const Matrix4c id = Matrix4c::Identity();
  const double cr = c.real();
  if (cr < 0.0) {
    const double r = std::sqrt(-cr);
    return std::cos(r) * id + (std::sin(r) / r) * s;
  }
  if (cr > 0.0) {
    const double r = std::sqrt(cr);
    return std::cosh(r) * id + (std::sinh(r) / r) * s;
  }
  return id + s;
}

Matrix4c spin_generator(const Matrix4r& x, const GammaRep& rep) {
  Matrix4c s = Matrix4c::Zero();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double xab = metric_sign(a) * x(a, b);  // X_{ab} = g_{aa} X^a_b
      if (xab != 0.0) s += 0.25 * xab * rep.upper(a) * rep.upper(b);
    }
  }
  return s;
}

double parse_real(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_real(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Matrix4r exp_generator(const Matrix4r& x) {
  const Matrix4r id = Matrix4r::Identity();
  const double norm2 = x.squaredNorm();
  if (norm2 == 0.0) return id;
  const Matrix4r x2 = x * x;
  const Matrix4r x3 = x2 * x;
  const double c = (x3.cwiseProduct(x)).sum() / norm2;
  if ((x3 - c * x).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, x3.cwiseAbs().maxCoeff())) {
    return x.exp();
  }
  if (c < 0.0) {
    const double a = std::sqrt(-c);
    const double h = std::sin(0.5 * a) / a;
    return id + (std::sin(a) / a) * x + 2.0 * h * h * x2;
  }
  if (c > 0.0) {
    const double a = std::sqrt(c);
    const double h = std::sinh(0.5 * a) / a;
    return id + (std::sinh(a) / a) * x + 2.0 * h * h * x2;
  }
  return id + x + 0.5 * x2;
}

LorentzFrame identity_frame() { return LorentzFrame{}; }

LorentzFrame rotation(const Vector3r& axis, double angle) {
  std::string label = "rot(" + format_real(axis.x()) + "," + format_real(axis.y()) + "," +
                      format_real(axis.z()) + ";" + format_real(angle) + ")";
  return rotation(axis, angle, std::move(label));
}

LorentzFrame rotation(const Vector3r& axis, double angle, std::string label) {
  require_unit(axis, "rotation axis");
  Matrix4r x = Matrix4r::Zero();
  x.block<3, 3>(1, 1) = -angle * cross_matrix(axis);
  return LorentzFrame{exp_generator(x), std::move(label), {x}};
}

LorentzFrame boost(const Vector3r& direction, double rapidity) {
  require_unit(direction, "boost direction");
  Matrix4r x = Matrix4r::Zero();
  for (int k = 0; k < 3; ++k) {
    x(0, 1 + k) = -rapidity * direction[k];
    x(1 + k, 0) = -rapidity * direction[k];
  }
  std::string label = "boost(" + format_real(direction.x()) + "," + format_real(direction.y()) + "," +
                      format_real(direction.z()) + ";" + format_real(rapidity) + ")";
  return LorentzFrame{exp_generator(x), std::move(label), {x}};
}

LorentzFrame compose(const LorentzFrame& outer, const LorentzFrame& inner, std::string label) {
  LorentzFrame out{outer.lambda * inner.lambda, std::move(label), {}};
  const bool outer_bare = outer.generators.empty() && !outer.lambda.isIdentity(0.0);
  const bool inner_bare = inner.generators.empty() && !inner.lambda.isIdentity(0.0);
  if (!outer_bare && !inner_bare) {
    out.generators = outer.generators;
    out.generators.insert(out.generators.end(), inner.generators.begin(), inner.generators.end());
  }
  return out;
}

LorentzFrame frame_from_matrix(const Matrix4r& lambda, std::string label) {
  return LorentzFrame{lambda, std::move(label), {}};
}

LorentzFrame frame_rx() { return rotation(Vector3r::UnitX(), kPi / 2, "Rx"); }
LorentzFrame frame_ry() { return rotation(Vector3r::UnitY(), kPi / 2, "Ry"); }
LorentzFrame frame_rz() { return rotation(Vector3r::UnitZ(), kPi / 2, "Rz"); }

Vector3r unit_direction(double theta, double phi) {
  return Vector3r(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
}

LorentzFrame direction_frame(double theta, double phi, int axis) {
  LorentzFrame q;
  switch (axis) {
    case 1: q = rotation(Vector3r::UnitY(), -kPi / 2); break;
    case 2: q = rotation(Vector3r::UnitX(), kPi / 2); break;
    case 3: break;
    default: throw Error(ErrorCode::BadAxis, "readout axis must be 1, 2 or 3");
  }
  std::string label = "dir(" + format_real(theta) + "," + format_real(phi);
  label += axis == 3 ? ")" : ";" + std::to_string(axis) + ")";
  const LorentzFrame polar = rotation(Vector3r::UnitY(), theta);
  const LorentzFrame azimuth = rotation(Vector3r::UnitZ(), phi);
  return compose(compose(q, polar, ""), azimuth, std::move(label));
}

LorentzFrame parse_frame(std::string_view label) {
  const std::string text(label);
  if (label == "I") return identity_frame();
  if (label == "Rx") return frame_rx();
  if (label == "Ry") return frame_ry();
  if (label == "Rz") return frame_rz();
  const std::size_t open = label.find('(');
  if (open == std::string_view::npos || label.back() != ')') {
    throw Error(ErrorCode::ParseError, "unrecognised frame label '" + text + "'");
  }
  const std::string_view head = label.substr(0, open);
  const std::string_view body = label.substr(open + 1, label.size() - open - 2);
  const std::size_t semi = body.find(';');
  const std::vector<double> first = parse_list(body.substr(0, semi));
  if (head == "dir") {
    if (first.size() != 2) throw Error(ErrorCode::ParseError, "dir() takes theta,phi");
    int axis = 3;
    if (semi != std::string_view::npos) axis = static_cast<int>(parse_real(body.substr(semi + 1)));
    LorentzFrame f = direction_frame(first[0], first[1], axis);
    f.label = text;
    return f;
  }
  if ((head == "rot" || head == "boost") && first.size() == 3 && semi != std::string_view::npos) {
    const Vector3r v(first[0], first[1], first[2]);
    const double param = parse_real(body.substr(semi + 1));
    LorentzFrame f = head == "rot" ? rotation(v, param) : boost(v, param);
    f.label = text;
    return f;
  }
  throw Error(ErrorCode::ParseError, "unrecognised frame label '" + text + "'");
}

double metric_defect(const Matrix4r& lambda) {
  return (lambda.transpose() * metric() * lambda - metric()).cwiseAbs().maxCoeff();
}

bool is_restricted(const Matrix4r& lambda) {
  if (!lambda.allFinite()) return false;
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  return metric_defect(lambda) <= 1e-12 * scale * scale && lambda.determinant() > 0.0 &&
         lambda(0, 0) >= 1.0 - 1e-12;
}

SpinorLift spinor_lift(const LorentzFrame& frame, const GammaRep& rep) {
  if (!is_restricted(frame.lambda)) {
    throw Error(ErrorCode::NotConnected, "frame '" + frame.label + "' is not a restricted Lorentz transformation");
  }
  SpinorLift lift{Matrix4c::Identity(), frame, rep.kind()};
  if (frame.generators.empty()) {
    if (!frame.lambda.isIdentity(0.0)) lift.L = lift_from_lambda(frame.lambda, rep);
    return lift;
  }
  for (const Matrix4r& x : frame.generators) lift.L = lift.L * exp_spin_generator(spin_generator(x, rep));
  return lift;
}

Matrix4c lift_from_lambda(const Matrix4r& lambda, const GammaRep& rep) {
  std::array<Matrix4c, 4> mixed;
  for (int mu = 0; mu < 4; ++mu) {
    mixed[mu] = Matrix4c::Zero();
    for (int nu = 0; nu < 4; ++nu) mixed[mu] += lambda(mu, nu) * rep.upper(nu);
  }
  // L mixed_mu L^{-1} = gamma^mu
  Matrix4c l = intertwiner(mixed, rep.gammas());
  // det L = 1 leaves a factor in {1, i, -1, -i}; spin lifts are real in the
  // Majorana basis, which removes the factor i.
  const Matrix4c to_mj = named_representation(RepKind::Majorana).change_of_basis() * rep.change_of_basis().adjoint();
  const Matrix4c in_mj = to_mj * l * to_mj.adjoint();
  if (in_mj.imag().norm() > in_mj.real().norm()) l *= Complex(0.0, -1.0);
  if (l.trace().real() < 0.0) l = -l;
  return l;
}

double lift_check(const Matrix4c& lift, const Matrix4r& lambda, const GammaRep& rep) {
  Eigen::FullPivLU<Matrix4c> lu(lift);
  if (!lu.isInvertible()) throw Error(ErrorCode::Singular, "lift matrix is not invertible");
  const Matrix4c inv = lu.inverse();
  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    Matrix4c target = Matrix4c::Zero();
    for (int nu = 0; nu < 4; ++nu) target += lambda(mu, nu) * rep.upper(nu);
    worst = std::max(worst, (inv * rep.upper(mu) * lift - target).cwiseAbs().maxCoeff());
  }
  return worst;
}

double lift_check(const SpinorLift& lift, const GammaRep& rep) {
  return lift_check(lift.L, lift.frame.lambda, rep);
}

BilinearSet transform_bilinears(const BilinearSet& b, const Matrix4r& lambda) {
  BilinearSet out = b;
  out.set_current(lambda * b.current());
  out.set_axial_current(lambda * b.axial_current());
  out.set_tensor(lambda * b.tensor() * lambda.transpose());
  return out;
}

BilinearSet transform_bilinears(const BilinearSet& b, const LorentzFrame& frame) {
  return transform_bilinears(b, frame.lambda);
}

Vector3r discrete_vector_recon(double nu_x, double nu_y, double nu_z) { return Vector3r(nu_x, nu_y, nu_z); }

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Legendre P_n(x) and its derivative by the three-term recurrence.
  const auto legendre = [n](double x, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

std::vector<QuadratureNode> quadrature_nodes(const QuadratureScheme& scheme) {
  std::vector<double> x, w;
  gauss_legendre(scheme.n_theta, x, w);
  std::vector<QuadratureNode> out;
  out.reserve(static_cast<std::size_t>(scheme.n_theta) * scheme.n_phi);
  const double dphi = 2.0 * kPi / scheme.n_phi;
  for (int i = 0; i < scheme.n_theta; ++i) {
    const double theta = 0.5 * kPi * (x[i] + 1.0);
    const double wt = 0.5 * kPi * w[i] * std::sin(theta);
    for (int j = 0; j < scheme.n_phi; ++j) out.push_back({theta, j * dphi, wt * dphi});
  }
  return out;
}

Vector3r reconstruction_kernel(double theta, double phi) {
  const double c = 2.0 / (kPi * kPi);
  return Vector3r(c * std::cos(phi), c * std::sin(phi), 3.0 / (4.0 * kPi) * std::cos(theta));
}

Vector3r kernel_vector_recon(std::span<const DirectionSample> samples, const QuadratureScheme& scheme) {
  const auto nodes = quadrature_nodes(scheme);
  const int nt = scheme.n_theta, np = scheme.n_phi;
  if (samples.size() != nodes.size()) {
    throw Error(ErrorCode::GridMismatch, "expected " + std::to_string(nodes.size()) + " samples, got " +
                                             std::to_string(samples.size()));
  }
  std::vector<double> thetas(nt);
  for (int i = 0; i < nt; ++i) thetas[i] = nodes[static_cast<std::size_t>(i) * np].theta;
  std::vector<char> seen(nodes.size(), 0);
  Vector3r v = Vector3r::Zero();
  const double dphi = 2.0 * kPi / np;
  for (const DirectionSample& s : samples) {
    const auto it = std::lower_bound(thetas.begin(), thetas.end(), s.theta);
    int i = -1;
    if (it != thetas.end() && std::abs(*it - s.theta) < 1e-9) i = static_cast<int>(it - thetas.begin());
    if (it != thetas.begin() && std::abs(*(it - 1) - s.theta) < 1e-9) i = static_cast<int>(it - thetas.begin()) - 1;
    const double jf = s.phi / dphi;
    const long jr = std::lround(jf);
    if (i < 0 || std::abs(jf - static_cast<double>(jr)) * dphi > 1e-9) {
      throw Error(ErrorCode::GridMismatch, "sample (" + format_real(s.theta) + ", " + format_real(s.phi) +
                                               ") is not a quadrature node");
    }
    const int j = static_cast<int>(((jr % np) + np) % np);
    const std::size_t idx = static_cast<std::size_t>(i) * np + j;
    if (seen[idx]) throw Error(ErrorCode::GridMismatch, "duplicate sample at a quadrature node");
    seen[idx] = 1;
    v += nodes[idx].weight * s.nu * reconstruction_kernel(nodes[idx].theta, nodes[idx].phi);
  }
  return v;
}

}  // namespace diractomo
