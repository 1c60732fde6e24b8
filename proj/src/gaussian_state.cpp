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

#include "gsep/gaussian_state.hpp"

#include <cmath>
#include <complex>
#include <random>

namespace gsep {

namespace {

Matrix split_block(const Matrix& m, const BipartiteSplit& split, Subsystem row, Subsystem col) {
  return m.block(split.offset_of(row), split.offset_of(col), split.dim_of(row),
                 split.dim_of(col));
}

void require_square(const Matrix& m, int dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " must be " + std::to_string(dim) + "x" +
                    std::to_string(dim));
  }
}

double log_det_spd(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "determinant of a non positive-definite matrix");
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(const BipartiteSplit& split, const Matrix& sigma)
    : split_(split) {
  require_square(sigma, split.dim(), "covariance matrix");
  if (!is_symmetric(sigma, 1e-12)) {
    throw Error(ErrorCode::NotSymmetric, "covariance matrix is not symmetric");
  }
  sigma_ = 0.5 * (sigma + sigma.transpose());
  if (!is_positive_definite(sigma_)) {
    throw Error(ErrorCode::NotPositiveDefinite, "covariance matrix is not positive definite");
  }
}

Matrix CovarianceMatrix::block(Subsystem row, Subsystem col) const {
  return split_block(sigma_, split_, row, col);
}

NormalizedMatrix::NormalizedMatrix(const BipartiteSplit& split, const Matrix& m)
    : split_(split) {
  require_square(m, split.dim(), "normalized matrix");
  if (!is_symmetric(m, 1e-12)) {
    throw Error(ErrorCode::NotSymmetric, "normalized matrix is not symmetric");
  }
  m_ = 0.5 * (m + m.transpose());
  if (!is_positive_definite(aa()) || !is_positive_definite(bb())) {
    throw Error(ErrorCode::NotPositiveDefinite, "diagonal blocks of M must be positive definite");
  }
  positive_definite_ = is_positive_definite(m_);
}

Matrix NormalizedMatrix::block(Subsystem row, Subsystem col) const {
  return split_block(m_, split_, row, col);
}

NormalizedMatrix to_normalized(const CovarianceMatrix& sigma) {
  return {sigma.split(), 0.5 * sigma.split().hbar() * inverse_spd(sigma.matrix())};
}

CovarianceMatrix from_normalized(const NormalizedMatrix& m) {
  if (!m.positive_definite()) {
    throw Error(ErrorCode::NotPositiveDefinite, "M is not positive definite");
  }
  return {m.split(), 0.5 * m.split().hbar() * inverse_spd(m.matrix())};
}

QuantumCondition check_quantum_condition(const Matrix& sigma, const SymplecticForm& j,
                                         double hbar, const Tolerances& tol) {
  require_square(sigma, j.dim(), "covariance matrix");
  if (!is_positive_definite(sigma)) {
    throw Error(ErrorCode::NotPositiveDefinite, "covariance matrix is not positive definite");
  }
  QuantumCondition qc;
  const Matrix m = 0.5 * hbar * inverse_spd(sigma);
  qc.symplectic_spectrum_of_m = symplectic_eigenvalues(m, j, tol.pairing);
  const double top = qc.symplectic_spectrum_of_m.front();
  qc.margin = 1.0 - top;
  qc.holds = top <= 1.0 + tol.spectral;

  ComplexMatrix h = sigma.cast<std::complex<double>>();
  h += std::complex<double>(0.0, 0.5 * hbar) * j.matrix().cast<std::complex<double>>();
  qc.hermitian_psd = is_positive_semidefinite(h, tol.psd);
  return qc;
}

QuantumCondition check_quantum_condition(const CovarianceMatrix& sigma, const Tolerances& tol) {
  return check_quantum_condition(sigma.matrix(),
                                 SymplecticForm::for_split(sigma.split(), Layout::ABBlock),
                                 sigma.split().hbar(), tol);
}

GaussianState::GaussianState(const CovarianceMatrix& sigma, std::optional<Vector> mean)
    : sigma_(sigma), m_(to_normalized(sigma)), mean_(Vector::Zero(sigma.split().dim())) {
  if (mean) {
    if (mean->size() != sigma.split().dim()) {
      throw Error(ErrorCode::DimensionMismatch, "mean vector length");
    }
    mean_ = *mean;
  }
  qc_ = check_quantum_condition(sigma_);
  if (!qc_.holds) {
    throw Error(ErrorCode::InvalidState,
                "quantum condition violated: max symplectic eigenvalue of M is " +
                    std::to_string(qc_.symplectic_spectrum_of_m.front()));
  }
}

GaussianState GaussianState::from_normalized(const NormalizedMatrix& m,
                                             std::optional<Vector> mean) {
  if (!m.positive_definite()) {
    throw Error(ErrorCode::InvalidState, "M is not positive definite");
  }
  return GaussianState(gsep::from_normalized(m), std::move(mean));
}

double purity(const GaussianState& state) {
  const auto& split = state.split();
  const double log_mu =
      split.modes() * std::log(0.5 * split.hbar()) - 0.5 * log_det_spd(state.covariance().matrix());
  return std::exp(log_mu);
}

bool is_pure(const GaussianState& state, double tol) {
  const auto& split = state.split();
  const double log_ratio = log_det_spd(state.covariance().matrix()) -
                           2.0 * split.modes() * std::log(0.5 * split.hbar());
  return std::abs(std::expm1(log_ratio)) <= tol;
}

Matrix pure_state_symplectic(const PureGaussianParams& params) {
  const auto n = params.x.rows();
  if (params.x.cols() != n || params.y.rows() != n || params.y.cols() != n || n == 0) {
    throw Error(ErrorCode::DimensionMismatch, "X and Y must be square of equal size");
  }
  if (!is_symmetric(params.x, 1e-12) || !is_symmetric(params.y, 1e-12)) {
    throw Error(ErrorCode::NotSymmetric, "X and Y must be symmetric");
  }
  if (!is_positive_definite(params.x)) {
    throw Error(ErrorCode::NotPositiveDefinite, "X must be positive definite");
  }
  const Matrix root = sqrt_psd(params.x);
  const Matrix inv_root = inverse_spd(root);
  Matrix s = Matrix::Zero(2 * n, 2 * n);
  s.topLeftCorner(n, n) = root;
  s.bottomLeftCorner(n, n) = inv_root * params.y;
  s.bottomRightCorner(n, n) = inv_root;
  return s;
}

GaussianState from_pure_params(const PureGaussianParams& params, const BipartiteSplit& split) {
  if (params.x.rows() != split.modes()) {
    throw Error(ErrorCode::DimensionMismatch, "X size does not match the split");
  }
  const Matrix s = pure_state_symplectic(params);
  const Matrix g = s.transpose() * s;
  const Matrix sigma = 0.5 * split.hbar() * inverse_spd(g);
  return GaussianState(CovarianceMatrix(split, global_to_ab(sigma, split)));
}

ReducedState reduce(const GaussianState& state, Subsystem keep) {
  const auto& split = state.split();
  ReducedState r;
  r.modes = keep == Subsystem::A ? split.n_a() : split.n_b();
  r.hbar = split.hbar();
  r.sigma = state.covariance().block(keep, keep);
  r.normalized = 0.5 * split.hbar() * inverse_spd(r.sigma);
  r.mean = state.mean().segment(split.offset_of(keep), split.dim_of(keep));
  r.quantum_condition =
      check_quantum_condition(r.sigma, SymplecticForm::standard(r.modes), split.hbar());
  return r;
}

double reduced_purity(const GaussianState& state, Subsystem keep) {
  const Subsystem other = keep == Subsystem::A ? Subsystem::B : Subsystem::A;
  const auto& m = state.normalized();
  const Matrix schur = m.block(keep, keep) - m.block(keep, other) *
                                                 inverse_spd(m.block(other, other)) *
                                                 m.block(other, keep);
  return std::exp(0.5 * log_det_spd(0.5 * (schur + schur.transpose())));
}

KlmResult klm_sample_check(const Matrix& sigma, const SymplecticForm& j, double hbar, int n,
                           double radius, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidSampleCount, "N must be at least 1");
  require_square(sigma, j.dim(), "covariance matrix");
  if (!is_positive_definite(sigma)) {
    throw Error(ErrorCode::NotPositiveDefinite, "covariance matrix is not positive definite");
  }
  if (radius <= 0.0) {
    const auto spec = symplectic_eigenvalues(0.5 * hbar * inverse_spd(sigma), j);
    radius = 3.0 * std::sqrt(hbar * spec.front());
  }
  const int d = j.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vector> z;
  z.reserve(n);
  for (int k = 0; k < n; ++k) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = gauss(rng);
    const double norm = v.norm();
    const double r = radius * std::pow(unit(rng), 1.0 / d);
    z.push_back(norm > 0 ? Vector(v * (r / norm)) : Vector(Vector::Zero(d)));
  }

  const Matrix& jm = j.matrix();
  const Matrix form = jm.transpose() * sigma * jm;
  ComplexMatrix lambda(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Vector delta = z[a] - z[b];
      const double omega = (jm * z[a]).dot(z[b]);
      const double gaussian = std::exp(-0.5 * delta.dot(form * delta));
      lambda(a, b) = std::polar(gaussian, -0.5 * hbar * omega);
    }
  }
  KlmResult out;
  out.min_eigenvalue = min_eigenvalue(lambda);
  out.passed = out.min_eigenvalue >= -1e-8 * n;
  return out;
}

KlmResult klm_sample_check(const CovarianceMatrix& sigma, int n, double radius,
                           std::uint64_t seed) {
  return klm_sample_check(sigma.matrix(), SymplecticForm::for_split(sigma.split(), Layout::ABBlock),
                          sigma.split().hbar(), n, radius, seed);
}

}  // namespace gsep
