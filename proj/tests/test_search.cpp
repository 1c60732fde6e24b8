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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gsep/search.hpp"
#include "oracles.hpp"

using namespace gsep;

namespace {

const BipartiteSplit kOneOne(1, 1, 1.0);

Matrix pattern_matrix(double la, double lb, double d, double dp) {
  Matrix m(4, 4);
  m << la, 0, d, 0, 0, la, 0, dp, d, 0, lb, 0, 0, dp, 0, lb;
  return m;
}

Matrix coupled_b() { return pattern_matrix(2.0 / 3, 1.0 / 8, 0.5, 0.5); }

Matrix scaled() { return pattern_matrix(0.8, 0.1, 0.25, 0.25); }

Matrix normal_form() {
  Matrix m(4, 4);
  m << 0.5, 0, 2.0 / 3, 0, 0, 0.5, 0, 0.25, 2.0 / 3, 0, 17.0 / 18, 0, 0, 0.25, 0, 3.0 / 16;
  return m;
}

}  // namespace

TEST_CASE("epsilon objective") {
  const NormalizedMatrix b(kOneOne, coupled_b());
  CHECK(epsilon_objective(b, Vector::Ones(2)) == doctest::Approx(7.0 / 6));
  CHECK(epsilon_objective(b, Vector::Constant(2, 13.0 / 21)) == doctest::Approx(41.0 / 42));
  oracle::Rng rng(401);
  for (int trial = 0; trial < 50; ++trial) {
    const BipartiteSplit sp(2, 1 + trial % 3, 1.0);
    const NormalizedMatrix m(sp, oracle::random_state_m(2, sp.n_b(), rng));
    const auto c2 = criterion2(m);
    const double expected = std::max(c2.spectrum_a.front(), c2.spectrum_b.front());
    CHECK(epsilon_objective(m, Vector::Ones(2 * std::min(2, sp.n_b()))) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("epsilon search strategies") {
  const NormalizedMatrix b(kOneOne, coupled_b());
  const NormalizedMatrix s(kOneOne, scaled());
  for (auto strategy : {EpsilonStrategy::UniformScalar, EpsilonStrategy::CoordinateDescent,
                        EpsilonStrategy::NelderMeadLike}) {
    EpsilonSearchConfig config;
    config.strategy = strategy;
    const auto found = search_epsilon(b, config);
    CHECK(found.found);
    CHECK(found.objective < 1.0);
    CHECK(epsilon_objective(b, found.epsilon) == doctest::Approx(found.objective));
    CHECK(found.evaluations > 0);

    const auto sep = search_epsilon(s, config);
    CHECK(sep.found);
    CHECK(sep.report.verdict == Verdict::Separable);
    REQUIRE(sep.report.certificate);
    CHECK(validate_certificate(from_normalized(s), *sep.report.certificate).valid);
  }
}

TEST_CASE("epsilon search never certifies an entangled state") {
  const double r = 1.0;
  const double c = std::cosh(2 * r), sh = std::sinh(2 * r);
  Matrix sigma(4, 4);
  sigma << c, 0, sh, 0, 0, c, 0, -sh, sh, 0, c, 0, 0, -sh, 0, c;
  const auto m = to_normalized(CovarianceMatrix(kOneOne, 0.5 * sigma));
  for (auto strategy : {EpsilonStrategy::UniformScalar, EpsilonStrategy::CoordinateDescent,
                        EpsilonStrategy::NelderMeadLike}) {
    EpsilonSearchConfig config;
    config.strategy = strategy;
    const auto result = search_epsilon(m, config);
    CHECK_FALSE(result.found);
    CHECK(result.objective > 1.0);
    CHECK(result.report.verdict == Verdict::Inconclusive);
  }
}

TEST_CASE("feasibility region of the worked normal form") {
  const NormalizedMatrix nf(kOneOne, normal_form());
  const auto region = region_scan(nf, 1, {200, 200});
  CHECK_FALSE(region.empty());
  CHECK(region.grid.size() == 200u * 200u);
  CHECK(region.a_node(0) == doctest::Approx(0.5));
  CHECK(region.a_node(199) == doctest::Approx(2.0));
  CHECK(region.b_node(0) == doctest::Approx(std::sqrt(17.0 / 6) / 4));
  CHECK(raster_boundary_error_cells(region) <= 1.0);

  const auto lemma = lemma_quadratic(region.lambda_a, region.lambda_b, region.d, region.d_p);
  REQUIRE(lemma.feasible);
  const double a0 = *lemma.a0;
  const double b0 = 0.5 * (region_lower_curve(region.lambda_a, region.lambda_b, region.d, a0) +
                           region_upper_curve(region.lambda_a, region.lambda_b, region.d_p, a0));
  CHECK(region.contains(a0, b0));
  CHECK_FALSE(region.contains(1.6, 0.6));
  CHECK_FALSE(region.contains(0.7, 1.8));
  CHECK_FALSE(region.contains(5.0, 1.0));

  for (const auto& p : region.points) {
    const auto [dq, dp] = criterion4_determinants(region.lambda_a, region.lambda_b, region.d,
                                                  region.d_p, p[0], p[1]);
    CHECK(std::min(dq, dp) >= -1e-10);
  }

  const auto threaded = region_scan(nf, 1, {200, 200}, 4);
  CHECK(threaded.grid == region.grid);
  CHECK(region_grid_csv(threaded) == region_grid_csv(region));

  CHECK_THROWS_AS(region_scan(nf, 2, {10, 10}), Error);
  CHECK_THROWS_AS(region_scan(nf, 1, {1, 10}), Error);
  oracle::Rng rng(402);
  CHECK_THROWS_AS(region_scan(NormalizedMatrix(kOneOne, oracle::random_state_m(1, 1, rng)), 1,
                              {10, 10}),
                  Error);
}

TEST_CASE("lemma feasibility agrees with the raster") {
  oracle::Rng rng(403);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const double la = oracle::uniform(0.2, 1.0, rng), lb = oracle::uniform(0.2, 1.0, rng);
    const double d = oracle::uniform(0.0, 0.5, rng), dp = oracle::uniform(0.0, 0.5, rng);
    const auto lemma = lemma_quadratic(la, lb, d, dp);
    auto p = [&](double a) { return (lemma.alpha * a + lemma.beta) * a + lemma.gamma; };
    double best = std::max(p(la), p(1 / la));
    if (lemma.alpha < 0) {
      const double v = -lemma.beta / (2 * lemma.alpha);
      if (v > la && v < 1 / la) best = std::max(best, p(v));
    }
    if (std::abs(best) < 1e-2) continue;
    const NormalizedMatrix m(kOneOne, pattern_matrix(la, lb, d, dp));
    const auto region = region_scan(m, 1, {400, 400});
    CHECK(lemma.feasible == !region.empty());
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("region exports") {
  const NormalizedMatrix nf(kOneOne, normal_form());
  const auto region = region_scan(nf, 1, {20, 30});
  const std::string csv = region_grid_csv(region);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "a,b,feasible");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 20 * 30);

  const auto curves = boundary_curves(region, 50);
  CHECK(curves.size() == 50u);
  const std::string bcsv = boundary_csv(curves);
  CHECK(bcsv.rfind("a,b_lower,b_upper\n", 0) == 0);
}

TEST_CASE("certificates from region points") {
  const NormalizedMatrix nf(kOneOne, normal_form());
  const auto region = region_scan(nf, 1, {100, 100});
  REQUIRE_FALSE(region.empty());
  const auto& p = region.points[region.points.size() / 2];
  const auto cert = assemble_certificate_from_region(nf, Vector::Constant(1, p[0]),
                                                     Vector::Constant(1, p[1]));
  CHECK(cert.provenance == Provenance::Criterion4);
  CHECK(validate_certificate(from_normalized(nf), cert).valid);
  try {
    assemble_certificate_from_region(nf, Vector::Constant(1, 1.6), Vector::Constant(1, 0.6));
    FAIL("expected InfeasiblePoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InfeasiblePoint);
  }
}
