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

#include "gsep/separability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsep/search.hpp"

namespace gsep {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Separable: return "Separable";
    case Verdict::NotSeparable: return "NotSeparable";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::PPT: return "PPT";
    case Criterion::Criterion1: return "Criterion1";
    case Criterion::Criterion2: return "Criterion2";
    case Criterion::Criterion3: return "Criterion3";
    case Criterion::Criterion4: return "Criterion4";
  }
  return "Unknown";
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Criterion1: return "Criterion1";
    case Provenance::Criterion2: return "Criterion2";
    case Provenance::Criterion3: return "Criterion3";
    case Provenance::Criterion4: return "Criterion4";
    case Provenance::UserSupplied: return "UserSupplied";
  }
  return "Unknown";
}

CertificateCheck validate_certificate(const CovarianceMatrix& sigma,
                                      const SeparabilityCertificate& cert, double tol) {
  const auto& split = sigma.split();
  CertificateCheck out;
  if (cert.sigma_a.rows() != split.dim_a() || cert.sigma_a.cols() != split.dim_a() ||
      cert.sigma_b.rows() != split.dim_b() || cert.sigma_b.cols() != split.dim_b()) {
    throw Error(ErrorCode::DimensionMismatch, "certificate blocks do not match the split");
  }
  Matrix product = Matrix::Zero(split.dim(), split.dim());
  product.topLeftCorner(split.dim_a(), split.dim_a()) = cert.sigma_a;
  product.bottomRightCorner(split.dim_b(), split.dim_b()) = cert.sigma_b;
  const Matrix gap = sigma.matrix() - product;
  out.gap_min_eigenvalue = min_eigenvalue(gap);
  out.gap_psd = is_positive_semidefinite(gap, tol);

  auto marginal_ok = [&](const Matrix& s, int modes) {
    ComplexMatrix h = s.cast<std::complex<double>>();
    h += std::complex<double>(0.0, 0.5 * split.hbar()) *
         SymplecticForm::standard(modes).matrix().cast<std::complex<double>>();
    return is_symmetric(s, 1e-9) && is_positive_semidefinite(h, tol);
  };
  out.marginal_a_quantum = marginal_ok(cert.sigma_a, split.n_a());
  out.marginal_b_quantum = marginal_ok(cert.sigma_b, split.n_b());
  out.valid = out.gap_psd && out.marginal_a_quantum && out.marginal_b_quantum;
  return out;
}

Matrix partial_transpose(const Matrix& ab_matrix, const BipartiteSplit& split) {
  Vector flip = Vector::Ones(split.dim());
  flip.tail(split.n_b()).setConstant(-1.0);
  return flip.asDiagonal() * ab_matrix * flip.asDiagonal();
}

CovarianceMatrix partial_transpose(const CovarianceMatrix& sigma) {
  return {sigma.split(), partial_transpose(sigma.matrix(), sigma.split())};
}

SeparabilityReport ppt_test(const CovarianceMatrix& sigma, const Tolerances& tol) {
  const auto qc = check_quantum_condition(sigma, tol);
  if (!qc.holds) {
    throw Error(ErrorCode::InvalidState, "input violates the quantum condition");
  }
  const auto& split = sigma.split();
  const Matrix m_bar =
      0.5 * split.hbar() * inverse_spd(partial_transpose(sigma.matrix(), split));
  SeparabilityReport r;
  r.criterion = Criterion::PPT;
  r.spectrum = symplectic_eigenvalues(m_bar, SymplecticForm::for_split(split, Layout::ABBlock),
                                      tol.pairing);
  const double top = r.spectrum.front();
  Witness w;
  w.kind = "PartialTranspose";
  w.value = 1.0 / top;
  w.threshold = 1.0;
  if (top > 1.0 + tol.spectral) {
    r.verdict = Verdict::NotSeparable;
    w.detail = "partially transposed covariance violates the quantum condition";
  } else {
    r.verdict = Verdict::Inconclusive;
    w.detail = "partially transposed covariance satisfies the quantum condition";
  }
  r.witness = w;
  return r;
}

namespace {

// Shared tail of the first three criteria: spectra of the two block bounds,
// then a certificate that is only released after independent validation.
SeparabilityReport decide_from_bounds(const NormalizedMatrix& m, const Matrix& bound_a,
                                      const Matrix& bound_b, Criterion criterion,
                                      Provenance provenance, const Tolerances& tol) {
  const auto& split = m.split();
  SeparabilityReport r;
  r.criterion = criterion;
  r.spectrum_a = symplectic_eigenvalues(bound_a, SymplecticForm::for_subsystem(split, Subsystem::A),
                                        tol.pairing);
  r.spectrum_b = symplectic_eigenvalues(bound_b, SymplecticForm::for_subsystem(split, Subsystem::B),
                                        tol.pairing);
  const double top_a = r.spectrum_a.front();
  const double top_b = r.spectrum_b.front();
  if (top_a > 1.0 + tol.spectral || top_b > 1.0 + tol.spectral) {
    const bool a_side = top_a > 1.0 + tol.spectral;
    r.witness = Witness{"SymplecticEigenvalueAboveOne",
                        a_side ? "A-side bound" : "B-side bound", a_side ? top_a : top_b, 1.0};
    return r;
  }
  if (!m.positive_definite()) {
    r.witness = Witness{"NotPositiveDefinite", "M is not a covariance ellipsoid",
                        min_eigenvalue(m.matrix()), 0.0};
    return r;
  }
  SeparabilityCertificate cert;
  cert.provenance = provenance;
  cert.sigma_a = 0.5 * split.hbar() * inverse_spd(bound_a);
  cert.sigma_b = 0.5 * split.hbar() * inverse_spd(bound_b);
  const auto check = validate_certificate(from_normalized(m), cert, tol.psd);
  if (!check.valid) {
    r.witness = Witness{"CertificateRejected", "Sigma - Sigma_A (+) Sigma_B failed validation",
                        check.gap_min_eigenvalue, 0.0};
    return r;
  }
  r.verdict = Verdict::Separable;
  r.certificate = std::move(cert);
  return r;
}

SeparabilityReport scaled_bounds(const NormalizedMatrix& m, const Vector& epsilon,
                                 Criterion criterion, Provenance provenance,
                                 const Tolerances& tol) {
  const auto& split = m.split();
  const int k = 2 * std::min(split.n_a(), split.n_b());
  if (epsilon.size() != k) {
    throw Error(ErrorCode::InvalidEpsilon,
                "epsilon must have " + std::to_string(k) + " entries");
  }
  for (int i = 0; i < k; ++i) {
    if (!(epsilon(i) > 0.0) || !std::isfinite(epsilon(i))) {
      throw Error(ErrorCode::InvalidEpsilon, "epsilon entries must be positive and finite");
    }
  }
  const auto svd = singular_value_decomposition(m.ab());
  Vector scale_a = Vector::Zero(split.dim_a());
  Vector scale_b = Vector::Zero(split.dim_b());
  for (int i = 0; i < k; ++i) {
    scale_a(i) = epsilon(i) * svd.values(i);
    scale_b(i) = svd.values(i) / epsilon(i);
  }
  const Matrix abs_ab = svd.u * scale_a.asDiagonal() * svd.u.transpose();
  const Matrix abs_ba = svd.v * scale_b.asDiagonal() * svd.v.transpose();
  SeparabilityReport r =
      decide_from_bounds(m, m.aa() + abs_ab, m.bb() + abs_ba, criterion, provenance, tol);
  if (r.certificate && criterion == Criterion::Criterion3) r.certificate->epsilon = epsilon;
  return r;
}

}  // namespace

SeparabilityReport criterion1(const NormalizedMatrix& m, const Tolerances& tol) {
  const double norm = singular_values(m.ab())(0);
  const auto& split = m.split();
  return decide_from_bounds(m, m.aa() + norm * Matrix::Identity(split.dim_a(), split.dim_a()),
                            m.bb() + norm * Matrix::Identity(split.dim_b(), split.dim_b()),
                            Criterion::Criterion1, Provenance::Criterion1, tol);
}

SeparabilityReport criterion2(const NormalizedMatrix& m, const Tolerances& tol) {
  const auto& split = m.split();
  const Vector ones = Vector::Ones(2 * std::min(split.n_a(), split.n_b()));
  return scaled_bounds(m, ones, Criterion::Criterion2, Provenance::Criterion2, tol);
}

SeparabilityReport criterion3(const NormalizedMatrix& m, const Vector& epsilon,
                              const Tolerances& tol) {
  return scaled_bounds(m, epsilon, Criterion::Criterion3, Provenance::Criterion3, tol);
}

namespace {

// Reorders the modes of a subsystem matrix S (rows are phase-space
// coordinates in x..., p... order) so that new mode q is old mode order[q].
Matrix reorder_mode_rows(const Matrix& s, const std::vector<int>& order) {
  const int n = static_cast<int>(order.size());
  Matrix out(s.rows(), s.cols());
  for (int q = 0; q < n; ++q) {
    out.row(q) = s.row(order[q]);
    out.row(n + q) = s.row(n + order[q]);
  }
  return out;
}

bool is_local_normal_form(const Matrix& block, double tol) {
  const int n = static_cast<int>(block.rows() / 2);
  const double scale = tol * (1.0 + inf_norm(block));
  for (int i = 0; i < 2 * n; ++i)
    for (int j = 0; j < 2 * n; ++j)
      if (i != j && std::abs(block(i, j)) > scale) return false;
  for (int q = 0; q < n; ++q)
    if (std::abs(block(q, q) - block(n + q, n + q)) > scale) return false;
  return true;
}

// S with S block S^T = diag(Lambda, Lambda), plus the spectrum in row order.
std::pair<Matrix, Vector> local_normal_form(const Matrix& block, double tol) {
  const int n = static_cast<int>(block.rows() / 2);
  if (is_local_normal_form(block, tol)) {
    return {Matrix::Identity(2 * n, 2 * n), block.diagonal().head(n)};
  }
  const auto w = williamson_decompose(block, SymplecticForm::standard(n));
  Vector spec(n);
  for (int q = 0; q < n; ++q) spec(q) = w.spectrum[q];
  return {w.s.inverse().transpose(), spec};
}

}  // namespace

Criterion4Setup criterion4_applicable(const NormalizedMatrix& m, const Tolerances& tol) {
  const auto& split = m.split();
  const int na = split.n_a();
  const int nb = split.n_b();
  const int k = std::min(na, nb);
  Criterion4Setup setup;

  auto [s_a, lambda_a] = local_normal_form(m.aa(), tol.pattern);
  auto [s_b, lambda_b] = local_normal_form(m.bb(), tol.pattern);

  auto transform = [&](const Matrix& sa, const Matrix& sb) {
    Matrix t = Matrix::Zero(split.dim(), split.dim());
    t.topLeftCorner(split.dim_a(), split.dim_a()) = sa;
    t.bottomRightCorner(split.dim_b(), split.dim_b()) = sb;
    Matrix md = t * m.matrix() * t.transpose();
    return Matrix(0.5 * (md + md.transpose()));
  };
  Matrix m_d = transform(s_a, s_b);

  // Greedy pairing of A modes with B modes by coupling weight.
  const Matrix coupling = m_d.topRightCorner(split.dim_a(), split.dim_b());
  std::vector<int> partner_of_a(na, -1);
  std::vector<bool> used_b(nb, false);
  for (int round = 0; round < k; ++round) {
    int best_i = -1, best_j = -1;
    double best = -1.0;
    for (int i = 0; i < na; ++i) {
      if (partner_of_a[i] >= 0) continue;
      for (int j = 0; j < nb; ++j) {
        if (used_b[j]) continue;
        const double w = std::abs(coupling(i, j)) + std::abs(coupling(na + i, nb + j));
        if (w > best) {
          best = w;
          best_i = i;
          best_j = j;
        }
      }
    }
    partner_of_a[best_i] = best_j;
    used_b[best_j] = true;
  }
  std::vector<int> order_a, order_b;
  for (int i = 0; i < na; ++i)
    if (partner_of_a[i] >= 0) {
      order_a.push_back(i);
      order_b.push_back(partner_of_a[i]);
    }
  for (int i = 0; i < na; ++i)
    if (partner_of_a[i] < 0) order_a.push_back(i);
  for (int j = 0; j < nb; ++j)
    if (!used_b[j]) order_b.push_back(j);

  s_a = reorder_mode_rows(s_a, order_a);
  s_b = reorder_mode_rows(s_b, order_b);
  m_d = transform(s_a, s_b);
  setup.lambda_a.resize(na);
  setup.lambda_b.resize(nb);
  for (int i = 0; i < na; ++i) setup.lambda_a(i) = lambda_a(order_a[i]);
  for (int j = 0; j < nb; ++j) setup.lambda_b(j) = lambda_b(order_b[j]);

  // Everything outside diag(Lambda_A, Lambda_A), diag(Lambda_B, Lambda_B) and
  // the two coupling diagonals must vanish.
  const int da = split.dim_a();
  auto mode_of = [&](int idx, int& sub, int& mode, bool& is_p) {
    if (idx < da) {
      sub = 0;
      is_p = idx >= na;
      mode = idx % na;
    } else {
      sub = 1;
      is_p = (idx - da) >= nb;
      mode = (idx - da) % nb;
    }
  };
  double off = 0.0;
  for (int r = 0; r < split.dim(); ++r) {
    for (int c = 0; c < split.dim(); ++c) {
      int sr, mr, sc, mc;
      bool pr, pc;
      mode_of(r, sr, mr, pr);
      mode_of(c, sc, mc, pc);
      bool allowed = false;
      if (pr == pc) {
        if (sr == sc) {
          allowed = mr == mc;
        } else {
          const int ma = sr == 0 ? mr : mc;
          const int mb = sr == 0 ? mc : mr;
          allowed = ma == mb && ma < k;
        }
      }
      if (!allowed) off = std::max(off, std::abs(m_d(r, c)));
    }
  }
  setup.off_pattern = off;
  setup.s_a = s_a;
  setup.s_b = s_b;
  setup.m_d = m_d;
  setup.d.resize(2 * k);
  for (int j = 0; j < k; ++j) {
    setup.d(j) = m_d(j, da + j);
    setup.d(k + j) = m_d(na + j, da + nb + j);
  }
  setup.applicable = off <= tol.pattern * inf_norm(m_d);
  setup.detail = setup.applicable ? "coupling block matches the two-diagonal pattern"
                                  : "coupling block has entries outside the pattern";
  return setup;
}

std::pair<double, double> criterion4_determinants(double lambda_a, double lambda_b, double d,
                                                  double d_p, double a, double b) {
  return {(a - lambda_a) * (b - lambda_b) - d * d,
          (1.0 / a - lambda_a) * (1.0 / b - lambda_b) - d_p * d_p};
}

SeparabilityReport criterion4(const NormalizedMatrix& m, const Vector& a, const Vector& b,
                              const Tolerances& tol) {
  return criterion4(m, criterion4_applicable(m, tol), a, b, tol);
}

SeparabilityReport criterion4(const NormalizedMatrix& m, const Criterion4Setup& setup,
                              const Vector& a, const Vector& b, const Tolerances& tol) {
  const auto& split = m.split();
  const int na = split.n_a();
  const int nb = split.n_b();
  const int k = std::min(na, nb);
  if (!setup.applicable) throw Error(ErrorCode::NotApplicable, setup.detail);
  if (a.size() != na || b.size() != nb) {
    throw Error(ErrorCode::DimensionMismatch, "a needs n_A entries and b needs n_B entries");
  }
  auto check_range = [](double v, double lambda, const std::string& name) {
    const double slack = 1e-12 * std::max(1.0, 1.0 / lambda);
    if (!(v >= lambda - slack && v <= 1.0 / lambda + slack)) {
      throw Error(ErrorCode::RangeViolation,
                  name + " = " + std::to_string(v) + " outside [" + std::to_string(lambda) +
                      ", " + std::to_string(1.0 / lambda) + "]");
    }
  };
  for (int i = 0; i < na; ++i) check_range(a(i), setup.lambda_a(i), "a_" + std::to_string(i + 1));
  for (int j = 0; j < nb; ++j) check_range(b(j), setup.lambda_b(j), "b_" + std::to_string(j + 1));

  SeparabilityReport r;
  r.criterion = Criterion::Criterion4;
  r.spectrum_a.assign(setup.lambda_a.data(), setup.lambda_a.data() + na);
  r.spectrum_b.assign(setup.lambda_b.data(), setup.lambda_b.data() + nb);

  for (int j = 0; j < k; ++j) {
    const auto [det_q, det_p] = criterion4_determinants(setup.lambda_a(j), setup.lambda_b(j),
                                                        setup.d(j), setup.d(k + j), a(j), b(j));
    if (det_q < -tol.spectral) {
      r.witness = Witness{"DeterminantCondition", "det Q_" + std::to_string(j + 1) + " < 0",
                          det_q, 0.0};
      return r;
    }
    if (det_p < -tol.spectral) {
      r.witness = Witness{"DeterminantCondition", "det P_" + std::to_string(j + 1) + " < 0",
                          det_p, 0.0};
      return r;
    }
  }
  if (!m.positive_definite()) {
    r.witness = Witness{"NotPositiveDefinite", "M is not a covariance ellipsoid",
                        min_eigenvalue(m.matrix()), 0.0};
    return r;
  }

  Vector p_a_inv(2 * na), p_b_inv(2 * nb);
  for (int i = 0; i < na; ++i) {
    p_a_inv(i) = 1.0 / a(i);
    p_a_inv(na + i) = a(i);
  }
  for (int j = 0; j < nb; ++j) {
    p_b_inv(j) = 1.0 / b(j);
    p_b_inv(nb + j) = b(j);
  }
  // Sigma_X = (hbar/2) S_X^T P_X^{-1} S_X pulls the local bound back to M.
  SeparabilityCertificate cert;
  cert.provenance = Provenance::Criterion4;
  cert.sigma_a = 0.5 * split.hbar() * setup.s_a.transpose() * p_a_inv.asDiagonal() * setup.s_a;
  cert.sigma_b = 0.5 * split.hbar() * setup.s_b.transpose() * p_b_inv.asDiagonal() * setup.s_b;
  cert.sigma_a = 0.5 * (cert.sigma_a + cert.sigma_a.transpose()).eval();
  cert.sigma_b = 0.5 * (cert.sigma_b + cert.sigma_b.transpose()).eval();
  cert.ab_params = std::make_pair(a, b);
  const auto check = validate_certificate(from_normalized(m), cert, tol.psd);
  if (!check.valid) {
    r.witness = Witness{"CertificateRejected", "Sigma - Sigma_A (+) Sigma_B failed validation",
                        check.gap_min_eigenvalue, 0.0};
    return r;
  }
  r.verdict = Verdict::Separable;
  r.certificate = std::move(cert);
  return r;
}

LemmaQuadratic lemma_quadratic(double lambda_a, double lambda_b, double d, double d_p) {
  if (!(lambda_a > 0.0 && lambda_a <= 1.0) || !(lambda_b > 0.0 && lambda_b <= 1.0)) {
    throw Error(ErrorCode::InvalidLambda, "symplectic eigenvalues must lie in (0, 1]");
  }
  const double la = lambda_a, lb = lambda_b, d2 = d * d, e2 = d_p * d_p;
  LemmaQuadratic q;
  q.alpha = la * lb * lb - lb * e2 - la;
  q.beta = (1.0 - lb * lb) * (1.0 + la * la) + la * lb * (d2 + e2) - d2 * e2;
  q.gamma = lb * (la * lb - d2) - la;

  auto p = [&](double a) { return (q.alpha * a + q.beta) * a + q.gamma; };
  auto slack = [&](double a) {
    return 1e-12 * (std::abs(q.alpha) * a * a + std::abs(q.beta) * a + std::abs(q.gamma));
  };
  std::vector<double> candidates{la, 1.0 / la};
  if (q.alpha < 0.0) {
    const double vertex = -q.beta / (2.0 * q.alpha);
    if (vertex > la && vertex < 1.0 / la) candidates.push_back(vertex);
  }
  double best_a = candidates.front();
  double best = -std::numeric_limits<double>::infinity();
  for (double a : candidates) {
    const double v = p(a) + slack(a);
    if (v > best) {
      best = v;
      best_a = a;
    }
  }
  q.feasible = best >= 0.0;
  if (q.feasible) q.a0 = best_a;
  return q;
}

double region_lower_curve(double lambda_a, double lambda_b, double d, double a) {
  if (a > lambda_a) return lambda_b + d * d / (a - lambda_a);
  return d == 0.0 ? lambda_b : std::numeric_limits<double>::infinity();
}

double region_upper_curve(double lambda_a, double lambda_b, double d_p, double a) {
  const double gap = 1.0 / a - lambda_a;
  if (gap > 0.0) return 1.0 / (lambda_b + d_p * d_p / gap);
  return d_p == 0.0 ? 1.0 / lambda_b : 0.0;
}

SeparabilityReport criterion4_auto(const NormalizedMatrix& m, const Tolerances& tol) {
  const auto& split = m.split();
  const int k = std::min(split.n_a(), split.n_b());
  const auto setup = criterion4_applicable(m, tol);
  SeparabilityReport r;
  r.criterion = Criterion::Criterion4;
  if (!setup.applicable) {
    r.witness = Witness{"NotApplicable", setup.detail, setup.off_pattern,
                        tol.pattern * inf_norm(setup.m_d)};
    return r;
  }
  r.spectrum_a.assign(setup.lambda_a.data(), setup.lambda_a.data() + split.n_a());
  r.spectrum_b.assign(setup.lambda_b.data(), setup.lambda_b.data() + split.n_b());
  const double top = std::max(setup.lambda_a.maxCoeff(), setup.lambda_b.maxCoeff());
  if (top > 1.0) {
    r.witness = Witness{"EmptyRange", "a marginal block has a symplectic eigenvalue above one",
                        top, 1.0};
    return r;
  }
  Vector a = setup.lambda_a;
  Vector b = setup.lambda_b;
  for (int j = 0; j < k; ++j) {
    const double la = setup.lambda_a(j), lb = setup.lambda_b(j);
    const auto lemma = lemma_quadratic(la, lb, setup.d(j), setup.d(k + j));
    if (!lemma.feasible) {
      r.witness = Witness{"NoFeasiblePair", "no (a, b) satisfies pair " + std::to_string(j + 1),
                          lemma.gamma, 0.0};
      return r;
    }
    a(j) = *lemma.a0;
    const double lo = std::max(lb, region_lower_curve(la, lb, setup.d(j), a(j)));
    const double hi = std::min(1.0 / lb, region_upper_curve(la, lb, setup.d(k + j), a(j)));
    b(j) = std::clamp(0.5 * (lo + hi), lb, 1.0 / lb);
  }
  return criterion4(m, setup, a, b, tol);
}

RunAllResult run_all(const CovarianceMatrix& sigma, const Tolerances& tol) {
  const GaussianState state(sigma);
  RunAllResult out;
  auto finish = [&](SeparabilityReport r) {
    const Verdict v = r.verdict;
    const Criterion c = r.criterion;
    out.reports.push_back(std::move(r));
    if (v != Verdict::Inconclusive) {
      out.overall = v;
      out.decided_by = c;
      return true;
    }
    return false;
  };
  if (finish(ppt_test(sigma, tol))) return out;
  const auto& m = state.normalized();
  if (finish(criterion1(m, tol))) return out;
  if (finish(criterion2(m, tol))) return out;
  EpsilonSearchConfig config;
  config.tol = tol;
  if (finish(search_epsilon(m, config).report)) return out;
  finish(criterion4_auto(m, tol));
  return out;
}

}  // namespace gsep
