// Copyright 2026 The gsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gsep/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gsep {

Ellipsoid::Ellipsoid(const Matrix& q_in, double level_in) : q(q_in), level(level_in) {
  if (q.rows() != q.cols() || q.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "ellipsoid form must be square");
  }
  if (!is_symmetric(q, 1e-10)) throw Error(ErrorCode::NotSymmetric, "ellipsoid form");
  q = (0.5 * (q + q.transpose())).eval();
  if (!is_positive_definite(q)) {
    throw Error(ErrorCode::NotPositiveDefinite, "ellipsoid form must be positive definite");
  }
  if (!(level > 0.0)) throw Error(ErrorCode::InvalidArgument, "ellipsoid level must be positive");
}

Ellipsoid covariance_ellipsoid(const NormalizedMatrix& m) {
  return {m.matrix(), m.split().hbar()};
}

Matrix schur_complement(const Matrix& m, const std::vector<int>& keep) {
  const int d = static_cast<int>(m.rows());
  std::vector<bool> kept(d, false);
  for (int k : keep) {
    if (k < 0 || k >= d || kept[k]) throw Error(ErrorCode::BadPlane, "invalid coordinate list");
    kept[k] = true;
  }
  std::vector<int> drop;
  for (int i = 0; i < d; ++i)
    if (!kept[i]) drop.push_back(i);

  auto sub = [&](const std::vector<int>& r, const std::vector<int>& c) {
    Matrix out(r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) out(i, j) = m(r[i], c[j]);
    return out;
  };
  Matrix kk = sub(keep, keep);
  if (drop.empty()) return kk;

  const Matrix dd = sub(drop, drop);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (dd + dd.transpose()), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxSchurCondition) {
    throw Error(ErrorCode::SingularBlock, "eliminated block is numerically singular");
  }
  const Matrix kd = sub(keep, drop);
  const Matrix s = kk - kd * dd.llt().solve(kd.transpose());
  return 0.5 * (s + s.transpose());
}

Matrix schur_complement(const NormalizedMatrix& m, Subsystem keep) {
  const auto& split = m.split();
  std::vector<int> coords(split.dim_of(keep));
  for (int i = 0; i < split.dim_of(keep); ++i) coords[i] = split.offset_of(keep) + i;
  return schur_complement(m.matrix(), coords);
}

Ellipsoid project_onto_coordinates(const Ellipsoid& omega, const std::vector<int>& coords) {
  return {schur_complement(omega.q, coords), omega.level};
}

Ellipsoid project_ellipsoid(const Ellipsoid& omega, const BipartiteSplit& split, Subsystem onto) {
  if (omega.dim() != split.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "ellipsoid does not match the split");
  }
  std::vector<int> coords(split.dim_of(onto));
  for (int i = 0; i < split.dim_of(onto); ++i) coords[i] = split.offset_of(onto) + i;
  return project_onto_coordinates(omega, coords);
}

bool ellipsoid_contains(const Ellipsoid& outer, const Ellipsoid& inner, double tol) {
  if (outer.dim() != inner.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "ellipsoids of different dimension");
  }
  return is_positive_semidefinite(Matrix(inner.q / inner.level - outer.q / outer.level), tol);
}

bool contains_quantum_blob(const Ellipsoid& omega, const SymplecticForm& j, double hbar,
                           double tol) {
  const auto spec = symplectic_eigenvalues(Matrix((hbar / omega.level) * omega.q), j);
  return spec.front() <= 1.0 + tol;
}

Ellipsoid blob_ellipsoid(const Matrix& s, double hbar) {
  return {inverse_spd(s * s.transpose()), hbar};
}

Matrix enclosed_blob(const Matrix& m) {
  const int modes = static_cast<int>(m.rows() / 2);
  const auto w = williamson_decompose(m, SymplecticForm::standard(modes));
  return w.s.inverse();
}

bool blob_projection_check(const Matrix& s_a, const Matrix& s_b, const Ellipsoid& omega,
                           const BipartiteSplit& split, double tol) {
  const auto ja = SymplecticForm::for_subsystem(split, Subsystem::A);
  const auto jb = SymplecticForm::for_subsystem(split, Subsystem::B);
  if (!is_symplectic(s_a, ja, 1e-9 * (1.0 + inf_norm(s_a) * inf_norm(s_a))) ||
      !is_symplectic(s_b, jb, 1e-9 * (1.0 + inf_norm(s_b) * inf_norm(s_b)))) {
    throw Error(ErrorCode::NotSymplectic, "blob factors must be symplectic");
  }
  const double hbar = split.hbar();
  const Ellipsoid shadow_a = project_ellipsoid(omega, split, Subsystem::A);
  const Ellipsoid shadow_b = project_ellipsoid(omega, split, Subsystem::B);
  return ellipsoid_contains(shadow_a, blob_ellipsoid(s_a, hbar), tol) &&
         ellipsoid_contains(shadow_b, blob_ellipsoid(s_b, hbar), tol);
}

double ellipsoid_volume(const Ellipsoid& omega) {
  const int m = omega.dim() / 2;
  double ball = 1.0;
  for (int k = 1; k <= m; ++k) ball *= std::numbers::pi / k;
  if (omega.dim() % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch, "volume is defined for even dimension");
  }
  return ball * std::pow(omega.level, m) / std::sqrt(omega.q.determinant());
}

double blob_volume(int modes, double hbar) {
  double v = 1.0;
  for (int k = 1; k <= modes; ++k) v *= std::numbers::pi * hbar / k;
  return v;
}

std::vector<std::array<double, 2>> ellipse_polyline(const Matrix& q2, double level, int points) {
  if (q2.rows() != 2 || q2.cols() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "planar ellipse needs a 2x2 form");
  }
  if (points < 3) throw Error(ErrorCode::InvalidArgument, "polyline needs at least 3 points");
  const Matrix root_inv = inverse_spd(sqrt_psd(q2));
  const double r = std::sqrt(level);
  std::vector<std::array<double, 2>> out;
  out.reserve(points);
  for (int k = 0; k < points; ++k) {
    const double t = 2.0 * std::numbers::pi * k / points;
    Eigen::Vector2d u(std::cos(t), std::sin(t));
    const Eigen::Vector2d z = r * root_inv * u;
    out.push_back({z(0), z(1)});
  }
  return out;
}

}  // namespace gsep
