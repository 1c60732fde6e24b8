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
#include "gsep/separability.hpp"
#include "oracles.hpp"

using namespace gsep;

namespace {

Matrix normal_form_example() {
  Matrix m(4, 4);
  m << 0.5, 0, 2.0 / 3, 0, 0, 0.5, 0, 0.25, 2.0 / 3, 0, 17.0 / 18, 0, 0, 0.25, 0, 3.0 / 16;
  return m;
}

}  // namespace

TEST_CASE("Schur complements") {
  const BipartiteSplit split(1, 1);
  Matrix block = Matrix::Zero(4, 4);
  block.topLeftCorner(2, 2) << 2.0, 0.3, 0.3, 1.0;
  block.bottomRightCorner(2, 2) = 0.7 * Matrix::Identity(2, 2);
  CHECK(schur_complement(NormalizedMatrix(split, block), Subsystem::A) == block.topLeftCorner(2, 2));

  const Matrix m = normal_form_example();
  const Matrix direct = schur_complement(NormalizedMatrix(split, m), Subsystem::A);
  const Matrix via_inverse = oracle::schur_via_inverse(m, 2);
  CHECK((direct - via_inverse).cwiseAbs().maxCoeff() < 1e-10);

  Matrix scalar(2, 2);
  scalar << 2.0, 1.0, 1.0, 1.0;
  CHECK(schur_complement(scalar, {0})(0, 0) == doctest::Approx(1.0));

  Matrix singular = Matrix::Identity(4, 4);
  singular(3, 3) = 1e-14;
  try {
    schur_complement(singular, {0, 1});
    FAIL("expected SingularBlock");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularBlock);
  }
}

TEST_CASE("projections") {
  const BipartiteSplit split(1, 1, 1.0);
  const Ellipsoid ball(Matrix::Identity(4, 4), 1.0);
  const auto shadow = project_ellipsoid(ball, split, Subsystem::A);
  CHECK(shadow.q == Matrix::Identity(2, 2));
  CHECK(shadow.level == 1.0);
  const auto again = project_onto_coordinates(shadow, {0, 1});
  CHECK(again.q == shadow.q);

  const NormalizedMatrix m(split, normal_form_example());
  const auto plane = project_onto_coordinates(covariance_ellipsoid(m), {0, 1});
  CHECK((plane.q - schur_complement(m, Subsystem::A)).norm() < 1e-14);

  oracle::Rng rng(201);
  for (int trial = 0; trial < 100; ++trial) {
    const BipartiteSplit sp(1 + trial % 3, 1 + (trial / 3) % 2, 1.0);
    const auto state = GaussianState::from_normalized(
        NormalizedMatrix(sp, oracle::random_state_m(sp.n_a(), sp.n_b(), rng)));
    const auto proj = project_ellipsoid(covariance_ellipsoid(state.normalized()), sp, Subsystem::B);
    const auto red = reduce(state, Subsystem::B);
    CHECK((proj.q - red.normalized).cwiseAbs().maxCoeff() <= 1e-10 * (1 + red.normalized.norm()));
    CHECK(ellipsoid_volume(proj) >= blob_volume(sp.n_b(), 1.0) * (1 - 1e-10));
  }
  CHECK_THROWS_AS(project_onto_coordinates(ball, {0, 0}), Error);
}

TEST_CASE("ellipsoid containment") {
  const Ellipsoid unit(Matrix::Identity(2, 2), 1.0);
  const Ellipsoid small(2.0 * Matrix::Identity(2, 2), 1.0);
  CHECK(ellipsoid_contains(unit, unit));
  CHECK(ellipsoid_contains(unit, small));
  CHECK_FALSE(ellipsoid_contains(small, unit));
  CHECK(ellipsoid_contains(unit, Ellipsoid(Matrix::Identity(2, 2), 0.5)));
  CHECK_THROWS_AS(ellipsoid_contains(unit, Ellipsoid(Matrix::Identity(4, 4), 1.0)), Error);

  oracle::Rng rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix a = oracle::random_spd(4, rng);
    const Matrix p = oracle::gaussian_matrix(4, 4, rng);
    const Matrix q = oracle::gaussian_matrix(4, 4, rng);
    const Ellipsoid e1(a, 1.0), e2(a + p.transpose() * p, 1.0),
        e3(a + p.transpose() * p + q.transpose() * q, 1.0);
    CHECK(ellipsoid_contains(e1, e2));
    CHECK(ellipsoid_contains(e2, e3));
    CHECK(ellipsoid_contains(e1, e3));
    if (ellipsoid_contains(e2, e1)) CHECK((e1.q - e2.q).norm() < 1e-8);
  }
}

TEST_CASE("bound of the first criterion dominates the coupled example") {
  Matrix m(4, 4);
  m << 0.5, 0, 2.0 / 3, 0, 0, 0.5, 0, 0.25, 2.0 / 3, 0, 1.0 / 3, 0, 0, 0.25, 0, 0.25;
  const double norm = 2.0 / 3;
  Matrix bound = Matrix::Zero(4, 4);
  bound.topLeftCorner(2, 2) = m.topLeftCorner(2, 2) + norm * Matrix::Identity(2, 2);
  bound.bottomRightCorner(2, 2) = m.bottomRightCorner(2, 2) + norm * Matrix::Identity(2, 2);
  CHECK(is_positive_semidefinite(Matrix(bound - m)));
}

TEST_CASE("quantum blobs") {
  const auto j2 = SymplecticForm::standard(2);
  CHECK(contains_quantum_blob(Ellipsoid(Matrix::Identity(4, 4), 1.0), j2, 1.0));
  CHECK_FALSE(contains_quantum_blob(Ellipsoid(2.0 * Matrix::Identity(4, 4), 1.0), j2, 1.0));
  const BipartiteSplit split(1, 1, 1.0);
  const NormalizedMatrix m(split, normal_form_example());
  CHECK(contains_quantum_blob(covariance_ellipsoid(m), SymplecticForm::for_split(split, Layout::ABBlock), 1.0));

  oracle::Rng rng(203);
  for (int trial = 0; trial < 200; ++trial) {
    const BipartiteSplit sp(1, 1 + trial % 2, 1.0);
    const Matrix sigma = 0.4 * oracle::random_spd(sp.dim(), rng, 0.2);
    const CovarianceMatrix cov(sp, sigma);
    const auto qc = check_quantum_condition(cov);
    const bool blob = contains_quantum_blob(covariance_ellipsoid(to_normalized(cov)),
                                            SymplecticForm::for_split(sp, Layout::ABBlock), 1.0);
    CHECK(blob == qc.holds);
  }
}

TEST_CASE("blob projections") {
  const BipartiteSplit split(1, 1, 1.0);
  const Matrix id = Matrix::Identity(2, 2);
  CHECK(blob_projection_check(id, id, Ellipsoid(Matrix::Identity(4, 4), 1.0), split));
  CHECK_FALSE(blob_projection_check(id, id, Ellipsoid(1.1 * Matrix::Identity(4, 4), 1.0), split));
  CHECK_THROWS_AS(blob_projection_check(2.0 * id, id, Ellipsoid(Matrix::Identity(4, 4), 1.0), split),
                  Error);

  const NormalizedMatrix m(split, normal_form_example());
  const auto report = criterion2(m);
  REQUIRE(report.verdict == Verdict::Separable);
  const Matrix ma = 0.5 * inverse_spd(report.certificate->sigma_a);
  const Matrix mb = 0.5 * inverse_spd(report.certificate->sigma_b);
  CHECK(blob_projection_check(enclosed_blob(ma), enclosed_blob(mb), covariance_ellipsoid(m), split));
}

TEST_CASE("ellipse polylines") {
  const auto pts = ellipse_polyline(Matrix::Identity(2, 2), 2.0, 360);
  REQUIRE(pts.size() == 360);
  for (const auto& p : pts) CHECK(std::hypot(p[0], p[1]) == doctest::Approx(std::sqrt(2.0)));
  Matrix q(2, 2);
  q << 2.0, 0.5, 0.5, 1.0;
  for (const auto& p : ellipse_polyline(q, 1.0, 50)) {
    Eigen::Vector2d z(p[0], p[1]);
    CHECK(z.dot(q * z) == doctest::Approx(1.0));
  }
}
