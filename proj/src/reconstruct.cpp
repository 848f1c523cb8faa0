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

#include "diractomo/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_map>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "diractomo/error.hpp"
#include "diractomo/format.hpp"
#include "diractomo/random.hpp"

namespace diractomo {
namespace {

using Vector16 = Eigen::Matrix<double, 16, 1>;
using Matrix16 = Eigen::Matrix<double, 16, 16>;
using MatrixXr = Eigen::MatrixXd;
using VectorXr = Eigen::VectorXd;

// Covariant vector layout (BilinearSet::as_vector): omega1, J^0..J^3,
// S^01 S^02 S^03 S^12 S^23 S^31, K^0..K^3, omega2.
constexpr std::array<int, 10> kJSColumns = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
constexpr std::array<int, 12> kCombinedColumns = {0, 1, 2, 3, 4, 8, 9, 10, 11, 12, 13, 14};

// b' = T(Lambda) b on the covariant vector.
Matrix16 transform_matrix(const Matrix4r& lambda) {
  Matrix16 t;
  for (int c = 0; c < 16; ++c) {
    t.col(c) = transform_bilinears(BilinearSet::from_vector(Vector16::Unit(c)), lambda).as_vector();
  }
  return t;
}

const MarginalRecord& require(const MarginalDataset& data, RepKind rep, const std::string& frame) {
  const MarginalRecord* record = data.find(rep, frame);
  if (record == nullptr) {
    throw Error(ErrorCode::MissingFrame,
                "no " + std::string(to_string(rep)) + " marginals for frame '" + frame + "'");
  }
  return *record;
}

struct LinearFit {
  Vector16 x = Vector16::Zero();
  double residual = 0.0;
};

// Least squares for the selected covariant columns over (rep, frame) records.
template <std::size_t N>
LinearFit fit_covariants(const MarginalDataset& data, const std::vector<std::pair<RepKind, LorentzFrame>>& keys,
                         const std::array<int, N>& columns) {
  MatrixXr a(4 * keys.size(), N);
  VectorXr rhs(4 * keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto& [rep, frame] = keys[i];
    const MarginalRecord& record = require(data, rep, frame.label);
    const Eigen::Matrix<double, 4, 16> rows = marginal_formula_matrix(rep) * transform_matrix(frame.lambda);
    for (std::size_t c = 0; c < N; ++c) a.block(4 * i, c, 4, 1) = rows.col(columns[c]);
    for (int k = 0; k < 4; ++k) rhs[4 * i + k] = record.w[k];
  }
  const VectorXr sol = a.colPivHouseholderQr().solve(rhs);
  LinearFit fit;
  for (std::size_t c = 0; c < N; ++c) fit.x[columns[c]] = sol[c];
  fit.residual = (a * sol - rhs).norm();
  return fit;
}

// w = |M psi|^2 for psi in the reference basis.
struct EntryOperator {
  const MarginalRecord* record;
  Matrix4c m;
};

std::vector<EntryOperator> entry_operators(const MarginalDataset& data, RepKind ref) {
  const GammaRep& base = named_representation(ref);
  std::vector<EntryOperator> ops;
  ops.reserve(data.entries.size());
  for (const MarginalEntry& e : data.entries) {
    const GammaRep& rep = named_representation(e.rep);
    const Matrix4c basis = rep.change_of_basis() * base.change_of_basis().adjoint();
    ops.push_back({&e.record, spinor_lift(parse_frame(e.record.frame), rep).L * basis});
  }
  return ops;
}

double marginal_mismatch(const DiracSpinor& psi, const std::vector<EntryOperator>& ops) {
  double worst = 0.0;
  for (const EntryOperator& op : ops) {
    const Vector4c moved = op.m * psi.components();
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(std::norm(moved[k]) - op.record->w[k]));
  }
  return worst;
}

std::string lounesto_class(const BilinearSet& b) {
  const double jj = b.current_lower().dot(b.current());
  if (jj > 1e-10 * b.current().squaredNorm()) return "regular (Omega1^2 + Omega2^2 > 0)";
  if (b.tensor().cwiseAbs().maxCoeff() <= 1e-8 * b.current().norm()) return "null, Weyl (S = 0)";
  return "null, singular with S != 0 (Majorana/flag class)";
}

// Spinor family psi = V xi over complex parameters xi, with V = I for the
// generic class and the chiral-basis upper pair for Weyl.
Eigen::Matrix<Complex, 4, Eigen::Dynamic> class_basis(RepKind kind, SpinorClass cls) {
  if (cls == SpinorClass::Generic) return Matrix4c::Identity();
  const Matrix4c to_rep =
      named_representation(kind).change_of_basis() * named_representation(RepKind::Chiral).change_of_basis().adjoint();
  return to_rep.leftCols(2);
}

// Real parameter vector p = (Re xi, Im xi) and the complex direction of each.
std::vector<Vector4c> parameter_directions(const Eigen::Matrix<Complex, 4, Eigen::Dynamic>& v) {
  std::vector<Vector4c> dirs;
  for (int c = 0; c < v.cols(); ++c) dirs.push_back(v.col(c));
  for (int c = 0; c < v.cols(); ++c) dirs.push_back(Complex(0.0, 1.0) * v.col(c));
  return dirs;
}

Vector4c spinor_from_parameters(const Eigen::Matrix<Complex, 4, Eigen::Dynamic>& v, const VectorXr& p) {
  const int n = static_cast<int>(v.cols());
  Vector4c psi = Vector4c::Zero();
  for (int c = 0; c < n; ++c) psi += Complex(p[c], p[n + c]) * v.col(c);
  return psi;
}

VectorXr parameters_from_spinor(const Eigen::Matrix<Complex, 4, Eigen::Dynamic>& v, const Vector4c& psi) {
  // V has orthonormal columns.
  const Eigen::VectorXcd xi = v.adjoint() * psi;
  VectorXr p(2 * xi.size());
  for (int c = 0; c < xi.size(); ++c) {
    p[c] = xi[c].real();
    p[xi.size() + c] = xi[c].imag();
  }
  return p;
}

// Rows: every (frame, k); columns: real parameters.
MatrixXr marginal_jacobian(const std::vector<Matrix4c>& lifts, const Vector4c& psi, const std::vector<Vector4c>& dirs) {
  MatrixXr jac(4 * lifts.size(), dirs.size());
  for (std::size_t f = 0; f < lifts.size(); ++f) {
    const Vector4c a = lifts[f] * psi;
    for (std::size_t p = 0; p < dirs.size(); ++p) {
      const Vector4c d = lifts[f] * dirs[p];
      for (int k = 0; k < 4; ++k) jac(4 * f + k, p) = 2.0 * (std::conj(a[k]) * d[k]).real();
    }
  }
  return jac;
}

VectorXr marginal_vector(const std::vector<Matrix4c>& lifts, const Vector4c& psi) {
  VectorXr w(4 * lifts.size());
  for (std::size_t f = 0; f < lifts.size(); ++f) {
    const Vector4c a = lifts[f] * psi;
    for (int k = 0; k < 4; ++k) w[4 * f + k] = std::norm(a[k]);
  }
  return w;
}

std::vector<Matrix4c> lifts_for(const std::vector<LorentzFrame>& frames, const GammaRep& rep) {
  std::vector<Matrix4c> lifts;
  for (const LorentzFrame& f : frames) lifts.push_back(spinor_lift(f, rep).L);
  return lifts;
}


struct FitResult {
  VectorXr p;
  VectorXr r;
};

// Levenberg-Marquardt on sum_k (w_k(psi(p)) - target_k)^2.
FitResult fit_marginals(const std::vector<Matrix4c>& lifts, const Eigen::Matrix<Complex, 4, Eigen::Dynamic>& v,
                        const VectorXr& target, VectorXr p, int max_iter) {
  const auto dirs = parameter_directions(v);
  double lambda = 1e-3;
  VectorXr r = marginal_vector(lifts, spinor_from_parameters(v, p)) - target;
  for (int iter = 0; iter < max_iter && r.cwiseAbs().maxCoeff() > 1e-14; ++iter) {
    const MatrixXr jac = marginal_jacobian(lifts, spinor_from_parameters(v, p), dirs);
    const MatrixXr normal = jac.transpose() * jac;
    const VectorXr grad = jac.transpose() * r;
    bool improved = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      MatrixXr damped = normal;
      damped.diagonal() += lambda * (normal.diagonal().array() + 1e-12).matrix();
      const VectorXr trial_p = p + damped.ldlt().solve(-grad);
      const VectorXr trial_r = marginal_vector(lifts, spinor_from_parameters(v, trial_p)) - target;
      if (trial_r.squaredNorm() < r.squaredNorm()) {
        const double gain = r.squaredNorm() - trial_r.squaredNorm();
        p = trial_p;
        r = trial_r;
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = gain > 1e-15 * target.squaredNorm();
        break;
      }
      lambda *= 4.0;
    }
    if (!improved) break;
  }
  return {p, r};
}

// Crawford reconstruction of every covariant candidate followed by validation
// against the measured marginals.
ReconstructionReport finish(const MarginalDataset& data, RepKind ref, const std::vector<BilinearSet>& covariant_sets,
                            double linear_residual, std::string diagnostics) {
  ReconstructionReport report;
  report.rep = ref;
  report.tolerance = recon_tolerance(data);
  report.linear_residual = linear_residual;
  const GammaRep& rep = named_representation(ref);
  const auto ops = entry_operators(data, ref);
  const bool noisy = data.min_shots().has_value();
  std::vector<Matrix4c> lifts;
  VectorXr target(4 * ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    lifts.push_back(ops[i].m);
    for (int k = 0; k < 4; ++k) target[4 * i + k] = ops[i].record->w[k];
  }
  const Eigen::Matrix<Complex, 4, Eigen::Dynamic> generic = Matrix4c::Identity();

  struct Scored {
    DiracSpinor psi;
    BilinearSet b;
    double residual;
  };
  std::vector<Scored> kept;
  double best_rejected = std::numeric_limits<double>::infinity();
  int degenerate = 0;
  for (const BilinearSet& b : covariant_sets) {
    DiracSpinor psi;
    try {
      psi = crawford_reconstruct_auto(rho_from_bilinears(b, rep), rep).psi;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateAnchor) throw;
      ++degenerate;
      continue;
    }
    if (noisy) {
      // Shot data: the completed covariants are not exactly those of a spinor;
      // polish the Crawford estimate by least squares on the marginals.
      const FitResult fit = fit_marginals(lifts, generic, target, parameters_from_spinor(generic, psi.components()), 100);
      psi = DiracSpinor(spinor_from_parameters(generic, fit.p)).canonical_phase();
    }
    const double residual = marginal_mismatch(psi, ops);
    if (residual < report.tolerance) {
      kept.push_back({psi, b, residual});
    } else {
      best_rejected = std::min(best_rejected, residual);
    }
  }
  std::ostringstream diag;
  diag << diagnostics;
  if (noisy) diag << "; candidates refined by least squares on the marginals";
  diag << "; candidates " << kept.size() << " of " << covariant_sets.size() << " valid";
  if (degenerate > 0) diag << " (" << degenerate << " with degenerate anchors)";
  if (kept.empty()) {
    diag << "; best marginal residual " << format_real(best_rejected) << " >= tolerance "
         << format_real(report.tolerance);
    throw Error(ErrorCode::NoValidCandidate, diag.str());
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Scored& x, const Scored& y) { return x.residual < y.residual; });
  for (const Scored& s : kept) {
    report.candidates.push_back(s.psi);
    report.covariants.push_back(s.b);
    report.marginal_residuals.push_back(s.residual);
    report.fierz_residuals.push_back(fierz_residuals(s.b));
  }
  if (kept.size() > 1) {
    const double threshold = std::max(1e-6, 10.0 * report.tolerance);
    report.ambiguity_flag = phase_distance(kept[0].psi, kept[1].psi) > threshold;
  }
  if (report.ambiguity_flag) diag << "; candidates are not phase-equivalent";
  report.diagnostics = diag.str();
  return report;
}

std::vector<std::pair<RepKind, LorentzFrame>> discrete_keys(std::initializer_list<RepKind> reps) {
  std::vector<std::pair<RepKind, LorentzFrame>> keys;
  for (RepKind rep : reps) {
    for (const LorentzFrame& f : frame_set(Protocol::discrete_majorana())) keys.emplace_back(rep, f);
  }
  return keys;
}

// Frame-local lower-index readouts of the Majorana marginals.
struct MajoranaReadout {
  double j0, j2, s01, s12;
};

MajoranaReadout majorana_readout(const std::array<double, 4>& w) {
  return {w[0] + w[1] + w[2] + w[3], (w[2] + w[3]) - (w[0] + w[1]), (w[0] - w[1]) + (w[2] - w[3]),
          (w[0] - w[1]) - (w[2] - w[3])};
}

std::vector<BilinearSet> with_completion(const BilinearSet& js, const FierzCompletion& completion) {
  std::vector<BilinearSet> sets;
  for (const FierzCandidate& c : completion.candidates) {
    BilinearSet b = js;
    b.omega1 = c.omega1;
    b.omega2 = c.omega2;
    b.set_axial_current(c.K);
    sets.push_back(b);
  }
  return sets;
}

double parallel_tolerance_for(const MarginalDataset& data) {
  // Noisy [a b] is never exactly rank one; marginal validation decides.
  return data.min_shots() ? std::numeric_limits<double>::infinity() : 1e-6;
}

}  // namespace

const MarginalRecord* MarginalDataset::find(RepKind rep, std::string_view frame) const {
  for (const MarginalEntry& e : entries) {
    if (e.rep == rep && e.record.frame == frame) return &e.record;
  }
  return nullptr;
}

std::optional<std::int64_t> MarginalDataset::min_shots() const {
  std::optional<std::int64_t> n;
  for (const MarginalEntry& e : entries) {
    if (e.record.shots) n = n ? std::min(*n, *e.record.shots) : *e.record.shots;
  }
  return n;
}

void MarginalDataset::validate() const {
  std::set<std::pair<RepKind, std::string>> keys;
  for (const MarginalEntry& e : entries) {
    if (!keys.emplace(e.rep, e.record.frame).second) {
      throw Error(ErrorCode::InconsistentInput, "duplicate record for (" + std::string(to_string(e.rep)) + ", " +
                                                    e.record.frame + ")");
    }
  }
}

MarginalDataset simulate_dataset(const DiracSpinor& psi, const Protocol& protocol, std::optional<std::int64_t> shots,
                                 std::uint64_t seed, std::uint64_t trial) {
  MarginalDataset data;
  data.protocol = protocol;
  const auto frames = frame_set(protocol);
  const GammaRep& ref = named_representation(reference_rep(protocol));
  for (RepKind kind : protocol_reps(protocol)) {
    const GammaRep& rep = named_representation(kind);
    const DiracSpinor local(change_representation(psi.components(), ref, rep));
    const std::string stream = std::string(to_string(kind)) + ":";
    for (const LorentzFrame& frame : frames) {
      MarginalRecord record = marginals(local, spinor_lift(frame, rep));
      if (shots) record = sample_shots(record, *shots, seed, trial, stream);
      data.entries.push_back({kind, std::move(record)});
    }
  }
  return data;
}

BilinearSet recover_JS_majorana(const MarginalDataset& data, double* residual) {
  const LinearFit fit = fit_covariants(data, discrete_keys({RepKind::Majorana}), kJSColumns);
  if (residual != nullptr) *residual = fit.residual;
  return BilinearSet::from_vector(fit.x);
}

FierzCompletion fierz_completion(const BilinearSet& b, double parallel_tolerance) {
  FierzCompletion out;
  const Vector4r j = b.current();
  const double jj = b.current_lower().dot(j);
  const Matrix4r s = b.tensor_lower();
  const Matrix4r dual = b.dual_lower();
  const double jscale = j.norm();
  const double sscale = s.cwiseAbs().maxCoeff();

  auto push = [&](double o1, double o2, const Vector4r& k) {
    FierzCandidate c{o1, o2, k, {}};
    BilinearSet full = b;
    full.omega1 = o1;
    full.omega2 = o2;
    full.set_axial_current(k);
    c.fierz = fierz_residuals(full);
    out.candidates.push_back(c);
  };

  if (jscale == 0.0 && sscale == 0.0) {
    out.degenerate = true;
    push(0.0, 0.0, Vector4r::Zero());
    return out;
  }
  if (jj <= 1e-10 * jscale * jscale) {
    out.null_class = true;
    if (sscale <= 1e-8 * jscale) {
      push(0.0, 0.0, j);
      push(0.0, 0.0, -j);
    } else {
      push(0.0, 0.0, Vector4r::Zero());
    }
    return out;
  }

  Eigen::Matrix<double, 4, 2> m;
  m.col(0) = j.transpose() * dual;  // a_nu
  m.col(1) = -(j.transpose() * s).transpose();  // b_nu
  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto sv = svd.singularValues();
  out.parallel_defect = sv[0] > 0.0 ? sv[1] / sv[0] : 0.0;
  if (out.parallel_defect > parallel_tolerance) {
    throw Error(ErrorCode::InconsistentInput,
                "J.(*S) and -J.S are not parallel (ratio " + format_real(out.parallel_defect) + ")");
  }
  const double omega = std::sqrt(jj);
  Eigen::Vector2d v = svd.matrixV().col(0);
  Vector4r u = svd.matrixU().col(0);
  // Deterministic orientation: the larger of (Omega1, Omega2) positive first.
  const int lead = std::abs(v[0]) >= std::abs(v[1]) ? 0 : 1;
  if (v[lead] < 0.0) {
    v = -v;
    u = -u;
  }
  const Vector4r k_upper = metric() * ((sv[0] / omega) * u);
  push(omega * v[0], omega * v[1], k_upper);
  push(-omega * v[0], -omega * v[1], -k_upper);
  return out;
}

double recon_tolerance(const MarginalDataset& data) {
  const auto n = data.min_shots();
  return n ? 3.0 / std::sqrt(static_cast<double>(*n)) : 1e-10;
}

std::array<double, 6> constraint_residuals(const MarginalDataset& data) {
  std::array<MajoranaReadout, 4> r{};
  const char* labels[4] = {"I", "Rx", "Ry", "Rz"};
  for (int f = 0; f < 4; ++f) r[f] = majorana_readout(require(data, RepKind::Majorana, labels[f]).w);
  return {std::abs(r[0].j0 - r[1].j0), std::abs(r[0].j0 - r[2].j0), std::abs(r[0].j0 - r[3].j0),
          std::abs(r[0].s01 - r[1].s01), std::abs(r[0].j2 - r[2].j2), std::abs(r[0].s12 - r[3].s12)};
}

namespace {

// Omega1 (standard) and J0 (chiral) must agree between I and each rotation.
std::array<double, 6> combined_constraints(const MarginalDataset& data) {
  const char* labels[4] = {"I", "Rx", "Ry", "Rz"};
  std::array<double, 4> omega1{}, j0{};
  for (int f = 0; f < 4; ++f) {
    const auto& ws = require(data, RepKind::Standard, labels[f]).w;
    const auto& wc = require(data, RepKind::Chiral, labels[f]).w;
    omega1[f] = ws[0] + ws[1] - ws[2] - ws[3];
    j0[f] = wc[0] + wc[1] + wc[2] + wc[3];
  }
  return {std::abs(omega1[0] - omega1[1]), std::abs(omega1[0] - omega1[2]), std::abs(omega1[0] - omega1[3]),
          std::abs(j0[0] - j0[1]), std::abs(j0[0] - j0[2]), std::abs(j0[0] - j0[3])};
}

}  // namespace

ReconstructionReport reconstruct_majorana(const MarginalDataset& data, const GammaRep& rep) {
  if (rep.kind() != RepKind::Majorana) {
    throw Error(ErrorCode::UnsupportedRep, "the discrete protocol reads Majorana-representation marginals");
  }
  double residual = 0.0;
  const BilinearSet js = recover_JS_majorana(data, &residual);
  const FierzCompletion completion = fierz_completion(js, parallel_tolerance_for(data));
  std::string diag = "protocol discrete-majorana; class " + lounesto_class(js);
  ReconstructionReport report =
      finish(data, RepKind::Majorana, with_completion(js, completion), residual, std::move(diag));
  report.constraint_residuals = constraint_residuals(data);
  return report;
}

ReconstructionReport reconstruct_combined(const MarginalDataset& data) {
  const LinearFit fit = fit_covariants(data, discrete_keys({RepKind::Standard, RepKind::Chiral}), kCombinedColumns);
  BilinearSet b = BilinearSet::from_vector(fit.x);
  // S^{0k} and Omega2 do not enter rotation marginals; fit them to the
  // J K - K J + Omega2 S + Omega1 (1/2) eps S = 0 components for each sign of
  // Omega2 = +-(J.J - Omega1^2)^{1/2}.
  const double jj = b.current_lower().dot(b.current());
  const double omega2_mag = std::sqrt(std::max(0.0, jj - b.omega1 * b.omega1));
  double best = std::numeric_limits<double>::infinity();
  BilinearSet chosen = b;
  for (double sign : {1.0, -1.0}) {
    BilinearSet trial = b;
    trial.omega2 = sign * omega2_mag;
    auto residual6 = [](const BilinearSet& x) {
      const auto r = fierz_residuals(x);
      Eigen::Matrix<double, 6, 1> v;
      for (int i = 0; i < 6; ++i) v[i] = r[3 + i];
      return v;
    };
    for (int k = 0; k < 3; ++k) trial.S[k] = 0.0;
    const Eigen::Matrix<double, 6, 1> r0 = residual6(trial);
    Eigen::Matrix<double, 6, 3> a;
    for (int k = 0; k < 3; ++k) {
      BilinearSet unit = trial;
      unit.S[k] = 1.0;
      a.col(k) = residual6(unit) - r0;
    }
    const Eigen::Vector3d p = a.colPivHouseholderQr().solve(-r0);
    for (int k = 0; k < 3; ++k) trial.S[k] = p[k];
    const double res = residual6(trial).norm();
    if (res < best) {
      best = res;
      chosen = trial;
    }
    if (omega2_mag == 0.0) break;
  }
  std::string diag = "protocol combined-st-chiral; class " + lounesto_class(chosen) +
                     "; S0k/Omega2 completion residual " + format_real(best);
  ReconstructionReport report = finish(data, RepKind::Standard, {chosen}, fit.residual, std::move(diag));
  report.constraint_residuals = combined_constraints(data);
  return report;
}

ReconstructionReport reconstruct_continuous(const MarginalDataset& data, const GammaRep& rep) {
  if (rep.kind() != RepKind::Majorana) {
    throw Error(ErrorCode::UnsupportedRep, "the continuous protocol reads Majorana-representation marginals");
  }
  const QuadratureScheme scheme = data.protocol.grid;
  const auto nodes = quadrature_nodes(scheme);
  std::unordered_map<std::string, const MarginalRecord*> by_label;
  for (const MarginalEntry& e : data.entries) {
    if (e.rep == RepKind::Majorana) by_label.emplace(e.record.frame, &e.record);
  }
  auto lookup = [&](const LorentzFrame& f) -> const MarginalRecord& {
    const auto it = by_label.find(f.label);
    if (it == by_label.end()) throw Error(ErrorCode::GridMismatch, "no marginals for grid frame '" + f.label + "'");
    return *it->second;
  };

  std::vector<DirectionSample> nu_j, nu_p, nu_a;
  double j0_sum = 0.0, j0_min = std::numeric_limits<double>::infinity(), j0_max = -j0_min;
  int count = 0;
  for (const QuadratureNode& node : nodes) {
    for (int axis = 1; axis <= 3; ++axis) {
      const MajoranaReadout r = majorana_readout(lookup(direction_frame(node.theta, node.phi, axis)).w);
      j0_sum += r.j0;
      j0_min = std::min(j0_min, r.j0);
      j0_max = std::max(j0_max, r.j0);
      ++count;
      // Readout axis `axis` points along e3': axis 2 carries J^2' = -J_2',
      // axis 1 carries S^{01}' = -S_01', axis 3 carries S^{12}' = S_12'.
      if (axis == 1) nu_p.push_back({node.theta, node.phi, -r.s01});
      if (axis == 2) nu_j.push_back({node.theta, node.phi, -r.j2});
      if (axis == 3) nu_a.push_back({node.theta, node.phi, r.s12});
    }
  }
  const Vector3r jv = kernel_vector_recon(nu_j, scheme);
  const Vector3r pv = kernel_vector_recon(nu_p, scheme);
  const Vector3r av = kernel_vector_recon(nu_a, scheme);

  BilinearSet js;
  js.J = {j0_sum / count, jv.x(), jv.y(), jv.z()};
  js.S = {pv.x(), pv.y(), pv.z(), av.z(), av.x(), av.y()};
  const FierzCompletion completion = fierz_completion(js, parallel_tolerance_for(data));
  std::string diag = "protocol continuous-grid " + std::to_string(scheme.n_theta) + "x" +
                     std::to_string(scheme.n_phi) + "; class " + lounesto_class(js);
  ReconstructionReport report =
      finish(data, RepKind::Majorana, with_completion(js, completion), 0.0, std::move(diag));
  report.constraint_residuals = {j0_max - j0_min, 0.0, 0.0, 0.0, 0.0, 0.0};
  return report;
}

ReconstructionReport reconstruct(const MarginalDataset& data) {
  switch (data.protocol.kind) {
    case Protocol::Kind::DiscreteMajorana:
      return reconstruct_majorana(data, named_representation(RepKind::Majorana));
    case Protocol::Kind::CombinedStChiral:
      return reconstruct_combined(data);
    case Protocol::Kind::ContinuousGrid:
      return reconstruct_continuous(data, named_representation(RepKind::Majorana));
  }
  throw Error(ErrorCode::InconsistentInput, "unknown protocol");
}

std::string_view to_string(SymmetryGroup group) {
  return group == SymmetryGroup::Rotations ? "rotations" : "full-lorentz";
}
std::string_view to_string(SpinorClass cls) { return cls == SpinorClass::Generic ? "generic" : "weyl"; }
std::string_view to_string(Verdict verdict) { return verdict == Verdict::Complete ? "complete" : "incomplete"; }

SymmetryGroup symmetry_group_from_string(std::string_view name) {
  if (name == "rotations") return SymmetryGroup::Rotations;
  if (name == "full-lorentz") return SymmetryGroup::FullRestrictedLorentz;
  throw Error(ErrorCode::ParseError, "unknown group '" + std::string(name) + "'");
}

SpinorClass spinor_class_from_string(std::string_view name) {
  if (name == "generic") return SpinorClass::Generic;
  if (name == "weyl") return SpinorClass::Weyl;
  throw Error(ErrorCode::ParseError, "unknown spinor class '" + std::string(name) + "'");
}

std::vector<LorentzFrame> group_sample(SymmetryGroup group, int count, std::uint64_t seed) {
  std::mt19937_64 rng = keyed_engine(seed, "group-sample", static_cast<std::uint64_t>(group));
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  auto random_unit = [&] {
    Vector3r v;
    do {
      v = Vector3r(normal(rng), normal(rng), normal(rng));
    } while (v.norm() < 1e-6);
    return Vector3r(v.normalized());
  };
  std::vector<LorentzFrame> frames{identity_frame()};
  for (int i = 1; i < count; ++i) {
    const LorentzFrame r = rotation(random_unit(), std::numbers::pi * uniform(rng));
    if (group == SymmetryGroup::FullRestrictedLorentz && i % 2 == 0) {
      const LorentzFrame b = boost(random_unit(), 0.2 + uniform(rng));
      frames.push_back(compose(b, r, b.label + "*" + r.label));
    } else {
      frames.push_back(r);
    }
  }
  return frames;
}

FeasibilityReport representation_feasibility(RepKind kind, SymmetryGroup group, SpinorClass cls, std::uint64_t seed,
                                             int base_points, int group_elements) {
  const GammaRep& rep = named_representation(kind);
  const auto lifts = lifts_for(group_sample(group, group_elements, seed), rep);
  const auto v = class_basis(kind, cls);
  const auto dirs = parameter_directions(v);
  const int n = static_cast<int>(dirs.size());

  FeasibilityReport report;
  report.rep_kind = kind;
  report.group = group;
  report.spinor_class = cls;
  report.class_dimension = n - 1;
  std::vector<bool> recoverable(16, true);
  const GammaBasis basis = gamma_basis(rep);

  for (int point = 0; point < base_points; ++point) {
    std::mt19937_64 rng = keyed_engine(seed, "feasibility-base", static_cast<std::uint64_t>(point));
    std::normal_distribution<double> normal;
    VectorXr p(n);
    for (int i = 0; i < n; ++i) p[i] = normal(rng);
    p.normalize();
    const Vector4c psi = spinor_from_parameters(v, p);

    MatrixXr jac = marginal_jacobian(lifts, psi, dirs);
    // Remove the global phase direction psi -> i psi.
    VectorXr t = parameters_from_spinor(v, Complex(0.0, 1.0) * psi);
    t.normalize();
    jac = jac * (MatrixXr::Identity(n, n) - t * t.transpose());

    Eigen::JacobiSVD<MatrixXr> svd(jac, Eigen::ComputeThinV);
    const VectorXr sv = svd.singularValues();
    const double cutoff = 1e-8 * sv[0];
    int rank = 0;
    while (rank < sv.size() && sv[rank] > cutoff) ++rank;
    if (rank >= report.span_rank) {
      report.span_rank = rank;
      report.singular_values.assign(sv.data(), sv.data() + sv.size());
    }
    const MatrixXr row_space = svd.matrixV().leftCols(rank);

    // Covariant gradients by central differences (exact for quadratics).
    const double h = 1e-3;
    for (int q = 0; q < 16; ++q) {
      VectorXr g(n);
      for (int i = 0; i < n; ++i) {
        const DiracSpinor plus(Vector4c(psi + h * dirs[i])), minus(Vector4c(psi - h * dirs[i]));
        g[i] = (bilinears(plus, rep).as_vector()[q] - bilinears(minus, rep).as_vector()[q]) / (2.0 * h);
      }
      const double gn = g.norm();
      if (gn <= 1e-9) continue;  // constant on the class
      const double off = (g - row_space * (row_space.transpose() * g)).norm();
      if (off > 1e-6 * gn) recoverable[q] = false;
    }
  }
  for (int q = 0; q < 16; ++q) {
    if (recoverable[q]) report.recoverable_slots.emplace_back(basis.labels[q]);
  }
  report.verdict = report.span_rank == report.class_dimension ? Verdict::Complete : Verdict::Incomplete;
  return report;
}

AmbiguityReport ambiguity_probe(const DiracSpinor& psi, RepKind kind, SymmetryGroup group, SpinorClass cls,
                                std::uint64_t seed, int group_elements) {
  const GammaRep& rep = named_representation(kind);
  const auto frames = group_sample(group, group_elements, seed);
  const auto lifts = lifts_for(frames, rep);
  const auto v = class_basis(kind, cls);
  const VectorXr target = marginal_vector(lifts, psi.components());

  AmbiguityReport report;
  report.psi = psi;
  report.frames = static_cast<int>(frames.size());
  report.marginal_residual = std::numeric_limits<double>::infinity();

  std::vector<std::pair<std::string, Vector4c>> seeds;
  for (int step = 1; step < 4; ++step) {
    const double alpha = step * std::numbers::pi / 2;
    const Complex phase = std::polar(1.0, alpha);
    Vector4c moved = psi.components();
    if (cls == SpinorClass::Generic) {
      moved.tail<2>() *= phase;
    } else {
      // Within the class: relative phase between the two Weyl components.
      VectorXr p = parameters_from_spinor(v, moved);
      const Complex xi1 = Complex(p[1], p[3]) * phase;
      p[1] = xi1.real();
      p[3] = xi1.imag();
      moved = spinor_from_parameters(v, p);
    }
    seeds.emplace_back("relative-phase(" + format_real(alpha) + ")", moved);
  }

  {
    BilinearSet flipped = bilinears(psi, rep);
    flipped.omega1 = -flipped.omega1;
    flipped.omega2 = -flipped.omega2;
    flipped.set_axial_current(-flipped.axial_current());
    try {
      seeds.emplace_back("fierz-sign", crawford_reconstruct_auto(rho_from_bilinears(flipped, rep), rep).psi.components());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateAnchor) throw;
    }
  }
  for (const auto& [name, start] : seeds) {
    VectorXr p = parameters_from_spinor(v, start);
    if (p.norm() == 0.0) continue;
    const FitResult fit = fit_marginals(lifts, v, target, p, 200);
    p = fit.p;
    const VectorXr& r = fit.r;
    const DiracSpinor candidate(spinor_from_parameters(v, p));
    const double residual = r.cwiseAbs().maxCoeff();
    const double distance = phase_distance(candidate, psi);
    const bool qualifies = distance > 0.1 && residual < 1e-9;
    const bool better = !report.found && distance > 0.1 && residual < report.marginal_residual;
    if (qualifies || better) {
      report.found = qualifies;
      report.partner = candidate;
      report.distance = distance;
      report.marginal_residual = residual;
      report.seed_strategy = name;
    }
    if (report.found) break;
  }
  return report;
}

}  // namespace diractomo
