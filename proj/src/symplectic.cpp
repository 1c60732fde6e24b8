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

#include "gsep/symplectic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gsep {

BipartiteSplit::BipartiteSplit(int n_a, int n_b, double hbar)
    : n_a_(n_a), n_b_(n_b), hbar_(hbar) {
  if (n_a < 1 || n_b < 1) {
    throw Error(ErrorCode::InvalidSplit, "n_A and n_B must be at least 1");
  }
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw Error(ErrorCode::InvalidSplit, "hbar must be positive");
  }
}

SymplecticForm::SymplecticForm(std::vector<int> x, std::vector<int> p)
    : x_(std::move(x)), p_(std::move(p)) {
  const int d = 2 * static_cast<int>(x_.size());
  j_ = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < x_.size(); ++k) {
    j_(x_[k], p_[k]) = 1.0;
    j_(p_[k], x_[k]) = -1.0;
  }
}

SymplecticForm SymplecticForm::standard(int modes) {
  if (modes < 1) throw Error(ErrorCode::InvalidArgument, "symplectic form needs at least one mode");
  std::vector<int> x(modes), p(modes);
  std::iota(x.begin(), x.end(), 0);
  std::iota(p.begin(), p.end(), modes);
  return {std::move(x), std::move(p)};
}

SymplecticForm SymplecticForm::for_split(const BipartiteSplit& split, Layout layout) {
  if (layout == Layout::Global) return standard(split.modes());
  const int na = split.n_a();
  const int nb = split.n_b();
  std::vector<int> x, p;
  for (int i = 0; i < na; ++i) {
    x.push_back(i);
    p.push_back(na + i);
  }
  for (int i = 0; i < nb; ++i) {
    x.push_back(2 * na + i);
    p.push_back(2 * na + nb + i);
  }
  return {std::move(x), std::move(p)};
}

SymplecticForm SymplecticForm::for_subsystem(const BipartiteSplit& split, Subsystem s) {
  return standard(s == Subsystem::A ? split.n_a() : split.n_b());
}

std::vector<int> SymplecticForm::standard_order() const {
  std::vector<int> order(x_);
  order.insert(order.end(), p_.begin(), p_.end());
  return order;
}

std::vector<int> ab_to_global_index(const BipartiteSplit& split) {
  const int n = split.modes();
  const int na = split.n_a();
  const int nb = split.n_b();
  std::vector<int> idx;
  idx.reserve(2 * n);
  for (int i = 0; i < na; ++i) idx.push_back(i);
  for (int i = 0; i < na; ++i) idx.push_back(n + i);
  for (int i = 0; i < nb; ++i) idx.push_back(na + i);
  for (int i = 0; i < nb; ++i) idx.push_back(n + na + i);
  return idx;
}

static void require_dim(const Matrix& m, int dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": expected " + std::to_string(dim) + "x" +
                    std::to_string(dim) + ", got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
}

Matrix global_to_ab(const Matrix& global, const BipartiteSplit& split) {
  require_dim(global, split.dim(), "global_to_ab");
  return permute_symmetric(global, ab_to_global_index(split));
}

Matrix ab_to_global(const Matrix& ab, const BipartiteSplit& split) {
  require_dim(ab, split.dim(), "ab_to_global");
  return unpermute_symmetric(ab, ab_to_global_index(split));
}

Vector global_to_ab(const Vector& global, const BipartiteSplit& split) {
  if (global.size() != split.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "global_to_ab: vector length");
  }
  const auto idx = ab_to_global_index(split);
  Vector out(global.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = global(idx[i]);
  return out;
}

Matrix permute_symmetric(const Matrix& m, std::span<const int> order) {
  const auto d = static_cast<Eigen::Index>(order.size());
  Matrix out(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out(i, j) = m(order[i], order[j]);
  return out;
}

Matrix unpermute_symmetric(const Matrix& m, std::span<const int> order) {
  const auto d = static_cast<Eigen::Index>(order.size());
  Matrix out(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out(order[i], order[j]) = m(i, j);
  return out;
}

double inf_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double inf_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = m.cwiseAbs().maxCoeff();
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

double min_eigenvalue(const Matrix& symmetric) {
  const Matrix s = 0.5 * (symmetric + symmetric.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double min_eigenvalue(const ComplexMatrix& hermitian) {
  const ComplexMatrix h = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_positive_semidefinite(const Matrix& symmetric, double tol) {
  return min_eigenvalue(symmetric) >= -tol * (1.0 + inf_norm(symmetric));
}

bool is_positive_semidefinite(const ComplexMatrix& hermitian, double tol) {
  return min_eigenvalue(hermitian) >= -tol * (1.0 + inf_norm(hermitian));
}

bool is_positive_definite(const Matrix& symmetric) {
  if (symmetric.rows() != symmetric.cols() || symmetric.size() == 0) return false;
  Eigen::LLT<Matrix> llt(0.5 * (symmetric + symmetric.transpose()));
  return llt.info() == Eigen::Success;
}

Matrix sqrt_psd(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (symmetric + symmetric.transpose()));
  const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix& v = es.eigenvectors();
  Matrix r = v * root.asDiagonal() * v.transpose();
  return 0.5 * (r + r.transpose());
}

Matrix inverse_spd(const Matrix& symmetric) {
  Eigen::LLT<Matrix> llt(0.5 * (symmetric + symmetric.transpose()));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "matrix is not positive definite");
  }
  Matrix inv = llt.solve(Matrix::Identity(symmetric.rows(), symmetric.cols()));
  return 0.5 * (inv + inv.transpose());
}

bool is_symplectic(const Matrix& s, const SymplecticForm& j, double tol) {
  require_dim(s, j.dim(), "is_symplectic");
  return inf_norm(Matrix(s * j.matrix() * s.transpose() - j.matrix())) <= tol;
}

static void require_spd_input(const Matrix& m, const SymplecticForm& j) {
  require_dim(m, j.dim(), "symplectic input");
  if (!is_symmetric(m, 1e-10)) throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric");
  if (!is_positive_definite(m)) {
    throw Error(ErrorCode::NotPositiveDefinite, "matrix is not positive definite");
  }
}

std::vector<double> symplectic_eigenvalues(const Matrix& m, const SymplecticForm& j,
                                           double pairing_tol) {
  require_spd_input(m, j);
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::EigenSolver<Matrix> es(j.matrix() * sym, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::PairingFailure, "eigenvalue iteration did not converge");
  }
  std::vector<double> up, down;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const auto z = es.eigenvalues()(i);
    (z.imag() >= 0.0 ? up : down).push_back(std::abs(z));
  }
  if (up.size() != down.size()) {
    throw Error(ErrorCode::PairingFailure, "spectrum of J*M is not symmetric about the real axis");
  }
  std::sort(up.begin(), up.end(), std::greater<>());
  std::sort(down.begin(), down.end(), std::greater<>());
  for (std::size_t k = 0; k < up.size(); ++k) {
    if (std::abs(up[k] - down[k]) > pairing_tol * std::max(up[k], down[k])) {
      throw Error(ErrorCode::PairingFailure,
                  "eigenvalue " + std::to_string(up[k]) + " has no conjugate partner");
    }
  }
  return up;
}

namespace {

// Williamson decomposition in the standard (x_1..x_m, p_1..p_m) layout.
WilliamsonDecomposition williamson_standard(const Matrix& m) {
  const Eigen::Index d = m.rows();
  const Eigen::Index modes = d / 2;
  const Matrix jm = SymplecticForm::standard(static_cast<int>(modes)).matrix();
  const Matrix root = sqrt_psd(m);
  Matrix k = root * jm * root;
  k = (0.5 * (k - k.transpose())).eval();

  Eigen::RealSchur<Matrix> schur(k);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorCode::PairingFailure, "real Schur form did not converge");
  }
  const Matrix& t = schur.matrixT();
  const Matrix& o = schur.matrixU();

  struct Pair {
    double lambda;
    Eigen::Index e;
    Eigen::Index f;
  };
  std::vector<Pair> pairs;
  for (Eigen::Index i = 0; i < d;) {
    if (i + 1 >= d || std::abs(t(i + 1, i)) == 0.0) {
      throw Error(ErrorCode::PairingFailure, "antisymmetric normal form has a 1x1 block");
    }
    const double beta = 0.5 * (t(i, i + 1) - t(i + 1, i));
    if (beta > 0) {
      pairs.push_back({beta, i, i + 1});
    } else {
      pairs.push_back({-beta, i + 1, i});
    }
    i += 2;
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& a, const Pair& b) { return a.lambda > b.lambda; });

  Matrix basis(d, d);
  Vector diag(d);
  std::vector<double> spectrum;
  for (Eigen::Index q = 0; q < modes; ++q) {
    basis.col(q) = o.col(pairs[q].e);
    basis.col(modes + q) = o.col(pairs[q].f);
    diag(q) = pairs[q].lambda;
    diag(modes + q) = pairs[q].lambda;
    spectrum.push_back(pairs[q].lambda);
  }
  WilliamsonDecomposition out;
  out.s = diag.cwiseSqrt().cwiseInverse().asDiagonal() * basis.transpose() * root;
  out.d = diag.asDiagonal();
  out.spectrum = std::move(spectrum);
  return out;
}

}  // namespace

WilliamsonDecomposition williamson_decompose(const Matrix& m, const SymplecticForm& j) {
  require_spd_input(m, j);
  const auto order = j.standard_order();
  const Matrix standard = permute_symmetric(0.5 * (m + m.transpose()), order);
  WilliamsonDecomposition w = williamson_standard(standard);
  w.s = unpermute_symmetric(w.s, order);
  w.d = unpermute_symmetric(w.d, order);
  return w;
}

SingularValueDecomposition singular_value_decomposition(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Vector singular_values(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

}  // namespace gsep
