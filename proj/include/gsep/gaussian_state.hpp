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

// Gaussian states described by their covariance matrix Sigma or by the
// normalized matrix M = (hbar/2) Sigma^{-1}. All bipartite matrices are stored
// in ABBlock order. The mean vector is carried along but plays no role in any
// separability decision.

#pragma once

#include <cstdint>
#include <optional>

#include "gsep/symplectic.hpp"

namespace gsep {

class CovarianceMatrix {
 public:
  /// Validates symmetry (1e-12 relative) and positive definiteness; the stored
  /// matrix is exactly symmetric.
  CovarianceMatrix(const BipartiteSplit& split, const Matrix& sigma);

  const BipartiteSplit& split() const { return split_; }
  const Matrix& matrix() const { return sigma_; }
  Matrix block(Subsystem row, Subsystem col) const;
  Matrix aa() const { return block(Subsystem::A, Subsystem::A); }
  Matrix ab() const { return block(Subsystem::A, Subsystem::B); }
  Matrix ba() const { return block(Subsystem::B, Subsystem::A); }
  Matrix bb() const { return block(Subsystem::B, Subsystem::B); }

 private:
  BipartiteSplit split_;
  Matrix sigma_;
};

/// M in ABBlock order. Only symmetry and positive-definite diagonal blocks are
/// enforced, so the criteria can still report spectra for a matrix that is not
/// a state. positive_definite() tells the two cases apart.
class NormalizedMatrix {
 public:
  NormalizedMatrix(const BipartiteSplit& split, const Matrix& m);

  const BipartiteSplit& split() const { return split_; }
  const Matrix& matrix() const { return m_; }
  bool positive_definite() const { return positive_definite_; }
  Matrix block(Subsystem row, Subsystem col) const;
  Matrix aa() const { return block(Subsystem::A, Subsystem::A); }
  Matrix ab() const { return block(Subsystem::A, Subsystem::B); }
  Matrix ba() const { return block(Subsystem::B, Subsystem::A); }
  Matrix bb() const { return block(Subsystem::B, Subsystem::B); }

 private:
  BipartiteSplit split_;
  Matrix m_;
  bool positive_definite_;
};

NormalizedMatrix to_normalized(const CovarianceMatrix& sigma);
/// Throws NotPositiveDefinite if M is not positive definite.
CovarianceMatrix from_normalized(const NormalizedMatrix& m);

struct QuantumCondition {
  bool holds = false;
  std::vector<double> symplectic_spectrum_of_m;  ///< descending
  double margin = 0.0;                           ///< 1 - max eigenvalue
  bool hermitian_psd = false;                    ///< Sigma + i hbar/2 J >= 0
};

/// Quantum condition for an arbitrary covariance matrix on the given form.
QuantumCondition check_quantum_condition(const Matrix& sigma, const SymplecticForm& j,
                                         double hbar, const Tolerances& tol = {});
QuantumCondition check_quantum_condition(const CovarianceMatrix& sigma,
                                         const Tolerances& tol = {});

class GaussianState {
 public:
  /// Throws InvalidState if the quantum condition fails.
  explicit GaussianState(const CovarianceMatrix& sigma, std::optional<Vector> mean = {});
  static GaussianState from_normalized(const NormalizedMatrix& m,
                                       std::optional<Vector> mean = {});

  const BipartiteSplit& split() const { return sigma_.split(); }
  const CovarianceMatrix& covariance() const { return sigma_; }
  const NormalizedMatrix& normalized() const { return m_; }
  const Vector& mean() const { return mean_; }
  const QuantumCondition& quantum_condition() const { return qc_; }

 private:
  CovarianceMatrix sigma_;
  NormalizedMatrix m_;
  Vector mean_;
  QuantumCondition qc_;
};

/// Marginal state of one subsystem.
struct ReducedState {
  int modes = 0;
  double hbar = 1.0;
  Matrix sigma;       ///< diagonal block of the parent covariance
  Matrix normalized;  ///< Schur complement of the parent M
  Vector mean;
  QuantumCondition quantum_condition;
};

double purity(const GaussianState& state);
bool is_pure(const GaussianState& state, double tol = 1e-10);

struct PureGaussianParams {
  Matrix x;  ///< n x n symmetric positive definite
  Matrix y;  ///< n x n symmetric
};

/// The symplectic S with S^T S = G for the given (X, Y), in Global layout.
Matrix pure_state_symplectic(const PureGaussianParams& params);
/// The pure state with M = G. The split must have n_A + n_B = dim(X).
GaussianState from_pure_params(const PureGaussianParams& params, const BipartiteSplit& split);

ReducedState reduce(const GaussianState& state, Subsystem keep);
double reduced_purity(const GaussianState& state, Subsystem keep);

struct KlmResult {
  double min_eigenvalue = 0.0;
  bool passed = false;
};

/// Finite-sample positivity check of the symplectic Fourier transform of the
/// Wigner function. Points are drawn uniformly from a Euclidean ball with a
/// seeded mt19937_64. A radius <= 0 selects the default
/// 3 * sqrt(hbar * max symplectic eigenvalue of M).
KlmResult klm_sample_check(const Matrix& sigma, const SymplecticForm& j, double hbar, int n,
                           double radius, std::uint64_t seed);
KlmResult klm_sample_check(const CovarianceMatrix& sigma, int n = 64, double radius = 0.0,
                           std::uint64_t seed = 0);

}  // namespace gsep
