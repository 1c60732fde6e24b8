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

#include <doctest.h>

#include <cmath>

#include "gsep/geometry.hpp"
#include "oracles.hpp"

using namespace gsep;

namespace {

Matrix coupled_example() {
  Matrix m(4, 4);
  m << 0.5, 0, 2.0 / 3, 0, 0, 0.5, 0, 0.25, 2.0 / 3, 0, 1.0 / 3, 0, 0, 0.25, 0, 0.25;
  return m;
}

}  // namespace

TEST_CASE("quantum condition on isotropic states") {
  for (double hbar : {1.0, 2.0, 0.5}) {
    const BipartiteSplit split(1, 1, hbar);
    const auto qc = check_quantum_condition(CovarianceMatrix(split, 0.5 * hbar * Matrix::Identity(4, 4)));
    CHECK(qc.holds);
    CHECK(qc.hermitian_psd);
    CHECK(std::abs(qc.margin) < 1e-12);
    for (double l : qc.symplectic_spectrum_of_m) CHECK(l == doctest::Approx(1.0));

    const auto bad = check_quantum_condition(Matrix(0.25 * hbar * Matrix::Identity(2, 2)),
                                             SymplecticForm::standard(1), hbar);
    CHECK_FALSE(bad.holds);
    CHECK_FALSE(bad.hermitian_psd);
    CHECK(bad.symplectic_spectrum_of_m[0] == doctest::Approx(2.0));
  }
}

TEST_CASE("quantum condition agrees with the Hermitian test on random matrices") {
  oracle::Rng rng(101);
  int holds = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const BipartiteSplit split(1 + trial % 2, 1 + trial % 3);
    const double scale = oracle::uniform(0.6, 1.6, rng);
    const Matrix m = scale * oracle::random_state_m(split.n_a(), split.n_b(), rng, 0.3);
    const Matrix sigma = 0.5 * inverse_spd(m);
    const auto qc = check_quantum_condition(CovarianceMatrix(split, sigma));
    const double top = qc.symplectic_spectrum_of_m.front();
    if (std::abs(top - 1.0) > 1e-6) CHECK(qc.holds == qc.hermitian_psd);
    holds += qc.holds;
  }
  CHECK(holds > 0);
  CHECK(holds < 300);
}

TEST_CASE("the indefinite coupled example is not a state") {
  const BipartiteSplit split(1, 1);
  const NormalizedMatrix m(split, coupled_example());
  CHECK_FALSE(m.positive_definite());
  CHECK(oracle::min_eig(coupled_example()) < -0.25);
  CHECK_THROWS_AS(from_normalized(m), Error);
  CHECK_THROWS_AS(GaussianState::from_normalized(m), Error);
}

TEST_CASE("covariance validation") {
  const BipartiteSplit split(1, 1);
  Matrix asym = Matrix::Identity(4, 4);
  asym(0, 1) = 1e-6;
  CHECK_THROWS_AS(CovarianceMatrix(split, asym), Error);
  CHECK_THROWS_AS(CovarianceMatrix(split, Matrix::Identity(2, 2)), Error);
  CHECK_THROWS_AS(CovarianceMatrix(split, -Matrix::Identity(4, 4)), Error);
  const CovarianceMatrix ok(split, Matrix::Identity(4, 4));
  CHECK(ok.ab() == ok.ba().transpose());
  CHECK_THROWS_AS(GaussianState(CovarianceMatrix(split, 0.1 * Matrix::Identity(4, 4))), Error);
}

TEST_CASE("normalized round trip") {
  oracle::Rng rng(102);
  for (int trial = 0; trial < 100; ++trial) {
    const BipartiteSplit split(1 + trial % 3, 1 + trial % 2, 0.5 + trial % 3);
    const Matrix m = oracle::random_spd(split.dim(), rng);
    const NormalizedMatrix nm(split, m);
    const Matrix back = to_normalized(from_normalized(nm)).matrix();
    CHECK((back - m).cwiseAbs().maxCoeff() <= 1e-12 * m.cwiseAbs().maxCoeff() * 10);
  }
}

TEST_CASE("purity") {
  const BipartiteSplit split(1, 1, 1.0);
  const GaussianState vacuum(CovarianceMatrix(split, 0.5 * Matrix::Identity(4, 4)));
  CHECK(purity(vacuum) == doctest::Approx(1.0));
  CHECK(is_pure(vacuum));

  const GaussianState thermal(CovarianceMatrix(split, Matrix::Identity(4, 4)));
  CHECK(purity(thermal) == doctest::Approx(0.25));
  CHECK_FALSE(is_pure(thermal));
  CHECK(reduced_purity(thermal, Subsystem::A) == doctest::Approx(0.5));
  CHECK(reduced_purity(thermal, Subsystem::B) == doctest::Approx(0.5));
  CHECK(purity(thermal) == doctest::Approx(std::sqrt(thermal.normalized().matrix().determinant())));
}

TEST_CASE("pure states from (X, Y)") {
  const BipartiteSplit split(1, 1, 1.0);
  const auto coherent = from_pure_params({Matrix::Identity(2, 2), Matrix::Zero(2, 2)}, split);
  CHECK((coherent.covariance().matrix() - 0.5 * Matrix::Identity(4, 4)).norm() < 1e-15);

  Matrix x = 2.0 * Matrix::Identity(2, 2);
  const Matrix s = pure_state_symplectic({x, Matrix::Zero(2, 2)});
  Vector g(4);
  g << 2.0, 2.0, 0.5, 0.5;
  CHECK((s.transpose() * s - Matrix(g.asDiagonal())).norm() < 1e-14);

  oracle::Rng rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    const BipartiteSplit sp(1 + trial % 2, 1 + trial % 3, 1.0 + 0.5 * (trial % 2));
    const int n = sp.modes();
    const Matrix xr = oracle::random_spd(n, rng, 0.3);
    Matrix yr = oracle::gaussian_matrix(n, n, rng);
    yr = (0.5 * (yr + yr.transpose())).eval();
    const Matrix sr = pure_state_symplectic({xr, yr});
    CHECK(is_symplectic(sr, SymplecticForm::standard(n), 1e-9 * (1 + sr.squaredNorm())));
    const auto state = from_pure_params({xr, yr}, sp);
    CHECK(is_pure(state, 1e-8));
    CHECK(std::abs(state.quantum_condition().margin) <= 1e-9);
    CHECK(purity(state) == doctest::Approx(1.0).epsilon(1e-9));
    // Both marginals of a pure state are equally mixed and no purer than it.
    const double pa = reduced_purity(state, Subsystem::A);
    const double pb = reduced_purity(state, Subsystem::B);
    CHECK(pa == doctest::Approx(pb).epsilon(1e-8));
    CHECK(pa <= purity(state) + 1e-10);
  }
  CHECK_THROWS_AS(pure_state_symplectic({-Matrix::Identity(2, 2), Matrix::Zero(2, 2)}), Error);
}

TEST_CASE("reduced states") {
  const BipartiteSplit split(1, 2, 1.0);
  Matrix sigma = Matrix::Zero(6, 6);
  Matrix sa(2, 2);
  sa << 1.0, 0.2, 0.2, 0.8;
  sigma.topLeftCorner(2, 2) = sa;
  sigma.bottomRightCorner(4, 4) = 0.7 * Matrix::Identity(4, 4);
  const GaussianState product{CovarianceMatrix(split, sigma)};
  const auto ra = reduce(product, Subsystem::A);
  CHECK(ra.sigma == sa);
  CHECK(ra.modes == 1);
  CHECK(ra.quantum_condition.holds);

  oracle::Rng rng(104);
  for (int trial = 0; trial < 100; ++trial) {
    const BipartiteSplit sp(1 + trial % 3, 1 + (trial / 3) % 3, 1.0);
    const GaussianState state = GaussianState::from_normalized(
        NormalizedMatrix(sp, oracle::random_state_m(sp.n_a(), sp.n_b(), rng)));
    for (auto keep : {Subsystem::A, Subsystem::B}) {
      const auto r = reduce(state, keep);
      const Matrix schur = schur_complement(state.normalized(), keep);
      CHECK((r.normalized - schur).cwiseAbs().maxCoeff() <= 1e-10 * (1 + schur.cwiseAbs().maxCoeff()));
      CHECK(r.quantum_condition.holds);
    }
    // Fischer's inequality.
    CHECK(purity(state) >= reduced_purity(state, Subsystem::A) * reduced_purity(state, Subsystem::B) - 1e-12);
  }
}

TEST_CASE("Schur determinant identity") {
  oracle::Rng rng(105);
  for (int trial = 0; trial < 200; ++trial) {
    const int na = 1 + trial % 3, nb = 1 + (trial / 3) % 3;
    const Matrix s = oracle::random_spd(2 * (na + nb), rng);
    const Matrix bb = s.bottomRightCorner(2 * nb, 2 * nb);
    const Matrix schur = s.topLeftCorner(2 * na, 2 * na) -
                         s.topRightCorner(2 * na, 2 * nb) * bb.inverse() *
                             s.bottomLeftCorner(2 * nb, 2 * na);
    const double lhs = s.determinant();
    CHECK(std::abs(lhs - schur.determinant() * bb.determinant()) <= 1e-9 * std::abs(lhs));
  }
}

TEST_CASE("finite-sample positivity check") {
  const BipartiteSplit split(1, 1, 1.0);
  const CovarianceMatrix vacuum(split, 0.5 * Matrix::Identity(4, 4));
  CHECK(klm_sample_check(vacuum, 1, 3.0, 0).passed);
  CHECK(klm_sample_check(vacuum, 50, 3.0, 1).passed);
  CHECK_THROWS_AS(klm_sample_check(vacuum, 0, 3.0, 0), Error);

  const auto a = klm_sample_check(vacuum, 40, 0.0, 9);
  const auto b = klm_sample_check(vacuum, 40, 0.0, 9);
  CHECK(a.min_eigenvalue == b.min_eigenvalue);

  const Matrix squeezed_too_far = 0.25 * Matrix::Identity(4, 4);
  int failures = 0;
  for (int seed = 0; seed < 20; ++seed) {
    failures += !klm_sample_check(squeezed_too_far, SymplecticForm::for_split(split, Layout::ABBlock),
                                  1.0, 100, 3.0, seed)
                     .passed;
  }
  CHECK(failures >= 1);

  oracle::Rng rng(106);
  for (int trial = 0; trial < 100; ++trial) {
    const BipartiteSplit sp(1 + trial % 2, 1, 1.0);
    const auto state = GaussianState::from_normalized(
        NormalizedMatrix(sp, oracle::random_state_m(sp.n_a(), sp.n_b(), rng)));
    CHECK(klm_sample_check(state.covariance(), 32, 0.0, trial).passed);
  }
}
