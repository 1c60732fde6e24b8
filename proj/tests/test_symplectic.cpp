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

#include "gsep/symplectic.hpp"
#include "oracles.hpp"

using namespace gsep;

TEST_CASE("symplectic forms") {
  const BipartiteSplit split(1, 1);
  const Matrix ab = SymplecticForm::for_split(split, Layout::ABBlock).matrix();
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 1) = expected(2, 3) = 1.0;
  expected(1, 0) = expected(3, 2) = -1.0;
  CHECK(ab == expected);

  const Matrix global = SymplecticForm::for_split(split, Layout::Global).matrix();
  CHECK(global == oracle::global_j(2));

  for (int na = 1; na <= 3; ++na) {
    for (int nb = 1; nb <= 3; ++nb) {
      const BipartiteSplit s(na, nb);
      for (auto layout : {Layout::ABBlock, Layout::Global}) {
        const Matrix j = SymplecticForm::for_split(s, layout).matrix();
        CHECK(j * j == -Matrix::Identity(s.dim(), s.dim()));
        CHECK(j.transpose() == -j);
      }
      CHECK(global_to_ab(oracle::global_j(na + nb), s) == oracle::ab_j(na, nb));
    }
  }
}

TEST_CASE("split validation") {
  CHECK_THROWS_AS(BipartiteSplit(0, 1), Error);
  CHECK_THROWS_AS(BipartiteSplit(1, 1, 0.0), Error);
  CHECK(BipartiteSplit(2, 3).dim() == 10);
}

TEST_CASE("layout conversion round trip") {
  oracle::Rng rng(7);
  const BipartiteSplit split(2, 3);
  const Matrix g = oracle::random_spd(split.dim(), rng);
  CHECK(ab_to_global(global_to_ab(g, split), split) == g);
  const Matrix p = oracle::global_to_ab_permutation(2, 3);
  CHECK((global_to_ab(g, split) - p * g * p.transpose()).norm() == 0.0);
}

TEST_CASE("symplectic eigenvalues of simple matrices") {
  const auto one = symplectic_eigenvalues(Matrix::Identity(4, 4), SymplecticForm::standard(2));
  REQUIRE(one.size() == 2);
  CHECK(one[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(one[1] == doctest::Approx(1.0).epsilon(1e-14));

  Matrix half = 0.5 * Matrix::Identity(2, 2);
  CHECK(std::abs(symplectic_eigenvalues(half, SymplecticForm::standard(1))[0] - 0.5) < 1e-12);

  Matrix b(2, 2);
  b << 17.0 / 18.0, 0, 0, 3.0 / 16.0;
  CHECK(std::abs(symplectic_eigenvalues(b, SymplecticForm::standard(1))[0] -
                 std::sqrt(17.0 / 6.0) / 4.0) < 1e-12);
}

TEST_CASE("symplectic eigenvalues are descending and reject non-PD input") {
  Matrix m = Matrix::Zero(4, 4);
  m.diagonal() << 3.0, 0.5, 3.0, 0.5;  // modes with eigenvalues 3 and 0.5
  const auto spec = symplectic_eigenvalues(m, SymplecticForm::standard(2));
  CHECK(spec[0] == doctest::Approx(3.0));
  CHECK(spec[1] == doctest::Approx(0.5));

  Matrix bad = Matrix::Identity(4, 4);
  bad(0, 0) = -1.0;
  try {
    symplectic_eigenvalues(bad, SymplecticForm::standard(2));
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }
  CHECK_THROWS_AS(symplectic_eigenvalues(Matrix::Identity(3, 3), SymplecticForm::standard(2)), Error);
}

TEST_CASE("symplectic eigenvalues agree with the Hermitian path") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int modes = 1 + trial % 4;
    const Matrix m = oracle::random_spd(2 * modes, rng);
    const auto fast = symplectic_eigenvalues(m, SymplecticForm::standard(modes));
    const auto ref = oracle::hermitian_symplectic_eigenvalues(m, oracle::global_j(modes));
    REQUIRE(ref.size() == fast.size());
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK(std::abs(fast[k] - ref[k]) <= 1e-8 * ref[k]);
  }
}

TEST_CASE("symplectic eigenvalues are invariant under symplectic congruence") {
  oracle::Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const int modes = 1 + trial % 4;
    const Matrix m = oracle::random_spd(2 * modes, rng);
    const Matrix s = oracle::random_symplectic(modes, rng);
    REQUIRE(is_symplectic(s, SymplecticForm::standard(modes), 1e-9 * (1 + s.squaredNorm())));
    const auto before = symplectic_eigenvalues(m, SymplecticForm::standard(modes));
    const auto after = symplectic_eigenvalues(s.transpose() * m * s, SymplecticForm::standard(modes));
    for (std::size_t k = 0; k < before.size(); ++k) {
      CHECK(std::abs(before[k] - after[k]) <= 1e-8 * before[k]);
    }
  }
}

TEST_CASE("Loewner monotonicity of symplectic eigenvalues") {
  oracle::Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int modes = 1 + trial % 3;
    const Matrix m = oracle::random_spd(2 * modes, rng);
    const Matrix p = oracle::gaussian_matrix(2 * modes, 2 * modes, rng);
    const auto lo = symplectic_eigenvalues(m, SymplecticForm::standard(modes));
    const auto hi = symplectic_eigenvalues(m + p.transpose() * p, SymplecticForm::standard(modes));
    for (std::size_t k = 0; k < lo.size(); ++k) CHECK(lo[k] <= hi[k] + 1e-8);
  }
}

static void check_williamson(const Matrix& m, const SymplecticForm& j) {
  const auto w = williamson_decompose(m, j);
  const double scale = inf_norm(m);
  CHECK(inf_norm(Matrix(w.s.transpose() * w.d * w.s - m)) <= 1e-9 * scale);
  CHECK(inf_norm(Matrix(w.s * j.matrix() * w.s.transpose() - j.matrix())) <= 1e-10 * j.modes());
  for (double l : w.spectrum) CHECK(l > 0.0);
  CHECK(std::is_sorted(w.spectrum.rbegin(), w.spectrum.rend()));
  for (int k = 0; k < j.modes(); ++k) {
    CHECK(w.d(j.x_indices()[k], j.x_indices()[k]) == w.spectrum[k]);
    CHECK(w.d(j.p_indices()[k], j.p_indices()[k]) == w.spectrum[k]);
  }
}

TEST_CASE("Williamson decomposition of small examples") {
  const auto w = williamson_decompose(Matrix::Identity(4, 4), SymplecticForm::standard(2));
  CHECK(w.spectrum[0] == doctest::Approx(1.0));
  CHECK(w.spectrum[1] == doctest::Approx(1.0));
  check_williamson(Matrix::Identity(4, 4), SymplecticForm::standard(2));

  Matrix sq(2, 2);
  sq << 2.0, 0.0, 0.0, 0.5;
  const auto ws = williamson_decompose(sq, SymplecticForm::standard(1));
  CHECK(ws.spectrum[0] == doctest::Approx(1.0).epsilon(1e-14));
  check_williamson(sq, SymplecticForm::standard(1));

  // Degenerate spectrum.
  check_williamson(0.3 * Matrix::Identity(6, 6), SymplecticForm::standard(3));
  // Non-standard layout.
  const BipartiteSplit split(2, 1);
  oracle::Rng rng(3);
  check_williamson(oracle::random_spd(6, rng), SymplecticForm::for_split(split, Layout::ABBlock));
}

TEST_CASE("Williamson decomposition of random matrices") {
  oracle::Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const int modes = 1 + trial % 4;
    check_williamson(oracle::random_spd(2 * modes, rng), SymplecticForm::standard(modes));
  }
}

TEST_CASE("pure-state Gram matrices have unit symplectic spectrum") {
  oracle::Rng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const int modes = 1 + trial % 4;
    const Matrix s = oracle::random_shear_symplectic(modes, rng);
    const auto w = williamson_decompose(s.transpose() * s, SymplecticForm::standard(modes));
    for (double l : w.spectrum) CHECK(std::abs(l - 1.0) < 1e-9);
  }
}

TEST_CASE("is_symplectic") {
  const auto j1 = SymplecticForm::standard(1);
  CHECK(is_symplectic(Matrix::Identity(2, 2), j1, 1e-12));
  CHECK_FALSE(is_symplectic(2.0 * Matrix::Identity(2, 2), j1, 1e-12));
  Matrix s(2, 2);
  // X = 2, Y = 1.
  s << std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(is_symplectic(s, j1, 1e-12));
  CHECK_THROWS_AS(is_symplectic(Matrix::Identity(4, 4), j1, 1e-12), Error);
}

TEST_CASE("singular values") {
  CHECK(singular_values(Matrix::Zero(2, 3)).isZero());
  Matrix d(2, 2);
  d << 2.0 / 3.0, 0.0, 0.0, 0.25;
  const Vector sv = singular_values(d);
  CHECK(std::abs(sv(0) - 2.0 / 3.0) < 1e-15);
  CHECK(std::abs(sv(1) - 0.25) < 1e-15);

  oracle::Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = oracle::gaussian_matrix(2 + trial % 3, 2 + (trial / 3) % 4, rng);
    CHECK(singular_values(a)(0) == doctest::Approx(oracle::power_iteration_norm(a)).epsilon(1e-9));
    const auto svd = singular_value_decomposition(a);
    Matrix dm = Matrix::Zero(a.rows(), a.cols());
    for (Eigen::Index k = 0; k < svd.values.size(); ++k) dm(k, k) = svd.values(k);
    CHECK((svd.u * dm * svd.v.transpose() - a).norm() < 1e-12 * (1 + a.norm()));
  }
}

TEST_CASE("PSD rule") {
  Matrix m = Matrix::Identity(3, 3);
  m(2, 2) = -1e-12;
  CHECK(is_positive_semidefinite(m));
  m(2, 2) = -1e-6;
  CHECK_FALSE(is_positive_semidefinite(m));
  CHECK(is_positive_definite(Matrix::Identity(2, 2)));
  CHECK_FALSE(is_positive_definite(Matrix::Zero(2, 2)));
}
