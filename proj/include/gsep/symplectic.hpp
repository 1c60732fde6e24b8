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

// Dense linear algebra specialised to symplectic structure.
//
// Coordinates are ordered per mode pair. Two layouts exist:
//   Global  z = (x_1..x_n, p_1..p_n),                 J = [[0, I], [-I, 0]]
//   ABBlock z = (x_A, p_A, x_B, p_B),                 J = J_A (+) J_B
// ABBlock is the canonical internal layout; every bipartite object in the
// library stores its matrices that way. Symplectic spectra are always returned
// in descending order.

#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "gsep/error.hpp"

namespace gsep {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

enum class Subsystem { A, B };
enum class Layout { Global, ABBlock };

/// Shared numerical thresholds. Defaults are the documented library contract.
struct Tolerances {
  /// PSD rule: min eigenvalue >= -psd * (1 + ||X||_inf).
  double psd = 1e-10;
  /// Absolute slack on "symplectic eigenvalue <= 1" tests.
  double spectral = 1e-10;
  /// Relative tolerance used to pair the +-i*lambda eigenvalues of J*M.
  double pairing = 1e-8;
  /// Off-pattern entries of a normal form must be <= pattern * ||M_D||.
  double pattern = 1e-8;
};

/// Split of n = n_A + n_B modes into two subsystems, with the value of hbar.
class BipartiteSplit {
 public:
  BipartiteSplit(int n_a, int n_b, double hbar = 1.0);

  int n_a() const { return n_a_; }
  int n_b() const { return n_b_; }
  double hbar() const { return hbar_; }
  int modes() const { return n_a_ + n_b_; }
  int dim() const { return 2 * modes(); }
  int dim_a() const { return 2 * n_a_; }
  int dim_b() const { return 2 * n_b_; }
  int dim_of(Subsystem s) const { return s == Subsystem::A ? dim_a() : dim_b(); }
  int offset_of(Subsystem s) const { return s == Subsystem::A ? 0 : dim_a(); }

  BipartiteSplit with_hbar(double hbar) const { return {n_a_, n_b_, hbar}; }
  BipartiteSplit swapped() const { return {n_b_, n_a_, hbar_}; }

  bool operator==(const BipartiteSplit&) const = default;

 private:
  int n_a_;
  int n_b_;
  double hbar_;
};

/// A standard symplectic form together with its conjugate-pair structure:
/// for mode k, J(x_index(k), p_index(k)) = +1.
class SymplecticForm {
 public:
  /// Global layout [[0, I], [-I, 0]] on `modes` modes.
  static SymplecticForm standard(int modes);
  static SymplecticForm for_split(const BipartiteSplit& split, Layout layout);
  /// J restricted to one subsystem; identical to standard(n_A) or standard(n_B).
  static SymplecticForm for_subsystem(const BipartiteSplit& split, Subsystem s);

  const Matrix& matrix() const { return j_; }
  int modes() const { return static_cast<int>(x_.size()); }
  int dim() const { return 2 * modes(); }
  std::span<const int> x_indices() const { return x_; }
  std::span<const int> p_indices() const { return p_; }

  /// Coordinate order (x_1..x_m, p_1..p_m) that maps this layout onto the
  /// global one.
  std::vector<int> standard_order() const;

 private:
  SymplecticForm(std::vector<int> x, std::vector<int> p);

  Matrix j_;
  std::vector<int> x_;
  std::vector<int> p_;
};

// ---------------------------------------------------------------------------
// Layout conversion.

/// Index map: position i in ABBlock order holds global coordinate result[i].
std::vector<int> ab_to_global_index(const BipartiteSplit& split);
Matrix global_to_ab(const Matrix& global, const BipartiteSplit& split);
Matrix ab_to_global(const Matrix& ab, const BipartiteSplit& split);
Vector global_to_ab(const Vector& global, const BipartiteSplit& split);

/// Symmetric permutation: out(i, j) = m(order[i], order[j]).
Matrix permute_symmetric(const Matrix& m, std::span<const int> order);
/// Inverse of permute_symmetric for the same order.
Matrix unpermute_symmetric(const Matrix& m, std::span<const int> order);

// ---------------------------------------------------------------------------
// Positivity.

/// Induced infinity norm (max absolute row sum).
double inf_norm(const Matrix& m);
double inf_norm(const ComplexMatrix& m);

bool is_symmetric(const Matrix& m, double rel_tol);
double min_eigenvalue(const Matrix& symmetric);
double min_eigenvalue(const ComplexMatrix& hermitian);

/// Shared PSD rule: min eigenvalue >= -tol * (1 + ||X||_inf).
bool is_positive_semidefinite(const Matrix& symmetric, double tol = 1e-10);
bool is_positive_semidefinite(const ComplexMatrix& hermitian, double tol = 1e-10);
/// Cholesky succeeds.
bool is_positive_definite(const Matrix& symmetric);

/// Symmetric square root of a symmetric PSD matrix.
Matrix sqrt_psd(const Matrix& symmetric);
/// Inverse of a symmetric positive-definite matrix, symmetrised.
Matrix inverse_spd(const Matrix& symmetric);

// ---------------------------------------------------------------------------
// Symplectic structure.

bool is_symplectic(const Matrix& s, const SymplecticForm& j, double tol);

/// Moduli of the eigenvalues of J*M, one per +-pair, descending.
///
/// Throws NotPositiveDefinite if M fails Cholesky, NotSymmetric if M is not
/// symmetric, PairingFailure if the spectrum does not split into +-pairs
/// within the relative pairing tolerance.
std::vector<double> symplectic_eigenvalues(const Matrix& m, const SymplecticForm& j,
                                           double pairing_tol = 1e-8);

struct WilliamsonDecomposition {
  Matrix s;                         ///< symplectic w.r.t. the input form
  std::vector<double> spectrum;     ///< descending
  Matrix d;                         ///< diagonal, diag(Lambda, Lambda) in the form's layout
};

/// M = S^T D S with S symplectic. Repeated symplectic eigenvalues are fine.
WilliamsonDecomposition williamson_decompose(const Matrix& m, const SymplecticForm& j);

struct SingularValueDecomposition {
  Matrix u;         ///< p x p orthogonal
  Vector values;    ///< min(p, q), descending
  Matrix v;         ///< q x q orthogonal
};

/// Full SVD A = U D V^T. Equal singular values keep the solver's order.
SingularValueDecomposition singular_value_decomposition(const Matrix& a);
Vector singular_values(const Matrix& a);

}  // namespace gsep
