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

// Separability decisions for bipartite Gaussian states: the partial-transpose
// test (necessary) and four sufficient criteria of increasing cost. Sufficient
// criteria never answer NotSeparable. Every Separable report carries a pair of
// local covariance matrices that has been re-validated against the input.

#pragma once

#include <optional>
#include <string>
#include <utility>

#include "gsep/gaussian_state.hpp"

namespace gsep {

enum class Verdict { Separable, NotSeparable, Inconclusive };
enum class Criterion { PPT, Criterion1, Criterion2, Criterion3, Criterion4 };
enum class Provenance { Criterion1, Criterion2, Criterion3, Criterion4, UserSupplied };

std::string_view to_string(Verdict v);
std::string_view to_string(Criterion c);
std::string_view to_string(Provenance p);

struct SeparabilityCertificate {
  Matrix sigma_a;
  Matrix sigma_b;
  Provenance provenance = Provenance::UserSupplied;
  std::optional<Vector> epsilon;
  std::optional<std::pair<Vector, Vector>> ab_params;
};

struct CertificateCheck {
  bool valid = false;
  double gap_min_eigenvalue = 0.0;  ///< min eigenvalue of Sigma - Sigma_A (+) Sigma_B
  bool gap_psd = false;
  bool marginal_a_quantum = false;
  bool marginal_b_quantum = false;
};

/// Independent re-check: Sigma - Sigma_A (+) Sigma_B >= 0 and both
/// Sigma_X + i hbar/2 J_X >= 0, all under the shared PSD rule.
CertificateCheck validate_certificate(const CovarianceMatrix& sigma,
                                      const SeparabilityCertificate& cert, double tol = 1e-10);

struct Witness {
  std::string kind;
  std::string detail;
  double value = 0.0;
  double threshold = 1.0;
};

struct SeparabilityReport {
  Criterion criterion = Criterion::PPT;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<double> spectrum_a;  ///< symplectic spectrum of the A-side bound
  std::vector<double> spectrum_b;
  std::vector<double> spectrum;    ///< PPT only: spectrum of the transposed M
  std::optional<SeparabilityCertificate> certificate;
  std::optional<Witness> witness;
};

/// Flips the sign of every p_B coordinate. Involutive.
CovarianceMatrix partial_transpose(const CovarianceMatrix& sigma);
Matrix partial_transpose(const Matrix& ab_matrix, const BipartiteSplit& split);

/// NotSeparable if the partially transposed state violates the quantum
/// condition, otherwise Inconclusive. The witness value is the smallest
/// symplectic eigenvalue of the transposed covariance in units of hbar/2.
/// Throws InvalidState if sigma itself is not a state.
SeparabilityReport ppt_test(const CovarianceMatrix& sigma, const Tolerances& tol = {});

SeparabilityReport criterion1(const NormalizedMatrix& m, const Tolerances& tol = {});
SeparabilityReport criterion2(const NormalizedMatrix& m, const Tolerances& tol = {});
/// epsilon has 2 min(n_A, n_B) positive entries, one per singular value of
/// M_AB. Throws InvalidEpsilon otherwise.
SeparabilityReport criterion3(const NormalizedMatrix& m, const Vector& epsilon,
                              const Tolerances& tol = {});

/// Normal-form data for the fourth criterion. M_D = T M T^T with
/// T = S_A (+) S_B; B modes are reordered so that A-mode j couples to B-mode j.
struct Criterion4Setup {
  bool applicable = false;
  std::string detail;
  Matrix s_a;
  Matrix s_b;
  Matrix m_d;
  Vector lambda_a;  ///< n_A values, normal-form order
  Vector lambda_b;  ///< n_B values, normal-form order
  Vector d;         ///< 2 k couplings (x-x then p-p), k = min(n_A, n_B)
  double off_pattern = 0.0;
};

Criterion4Setup criterion4_applicable(const NormalizedMatrix& m, const Tolerances& tol = {});

/// a has n_A entries, b has n_B entries, both indexed in normal-form order.
/// Throws NotApplicable or RangeViolation.
SeparabilityReport criterion4(const NormalizedMatrix& m, const Vector& a, const Vector& b,
                              const Tolerances& tol = {});
SeparabilityReport criterion4(const NormalizedMatrix& m, const Criterion4Setup& setup,
                              const Vector& a, const Vector& b, const Tolerances& tol = {});

/// Picks a_j from the lemma below and b_j at the middle of its admissible
/// interval, then runs criterion4. Inconclusive when not applicable.
SeparabilityReport criterion4_auto(const NormalizedMatrix& m, const Tolerances& tol = {});

/// det Q_j and det P_j for one coupled pair.
std::pair<double, double> criterion4_determinants(double lambda_a, double lambda_b, double d,
                                                  double d_p, double a, double b);

/// p(a) = alpha a^2 + beta a + gamma is nonnegative exactly where some b
/// completes a feasible pair (a, b) for the coupled pair (lambda_A, lambda_B,
/// d, D). The coefficients are re-derived from the determinant conditions.
struct LemmaQuadratic {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  bool feasible = false;
  std::optional<double> a0;
};

LemmaQuadratic lemma_quadratic(double lambda_a, double lambda_b, double d, double d_p);

/// Analytic region boundaries: b >= lower(a) from det Q and b <= upper(a)
/// from det P. At an endpoint where no b works, lower is +inf or upper is 0.
double region_lower_curve(double lambda_a, double lambda_b, double d, double a);
double region_upper_curve(double lambda_a, double lambda_b, double d_p, double a);

struct RunAllResult {
  std::vector<SeparabilityReport> reports;
  Verdict overall = Verdict::Inconclusive;
  std::optional<Criterion> decided_by;
};

/// PPT, then criteria 1, 2, 3 (searched epsilon) and 4 (when applicable),
/// stopping at the first that decides. Throws InvalidState for non-states.
RunAllResult run_all(const CovarianceMatrix& sigma, const Tolerances& tol = {});

}  // namespace gsep
