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

// Searches over the free parameters of the third and fourth criteria.

#pragma once

#include <array>
#include <string>

#include "gsep/separability.hpp"

namespace gsep {

enum class EpsilonStrategy { UniformScalar, CoordinateDescent, NelderMeadLike };

struct EpsilonSearchConfig {
  EpsilonStrategy strategy = EpsilonStrategy::UniformScalar;
  int scalar_grid = 200;
  double eps_min = 1e-2;
  double eps_max = 1e2;
  int max_iters = 50;
  double objective_tol = 1e-12;
  Tolerances tol{};
};

struct EpsilonSearchResult {
  bool found = false;
  Vector epsilon;
  double objective = 0.0;
  int evaluations = 0;
  SeparabilityReport report;
};

/// g(eps) = max of the largest symplectic eigenvalues of both scaled bounds.
double epsilon_objective(const NormalizedMatrix& m, const Vector& epsilon);

/// Every strategy first scans uniform vectors eps * (1, ..., 1) on a log grid,
/// in increasing order, and stops at the first eps with g <= 1 + tol. The
/// refining strategies then continue from the best grid point. When nothing is
/// found the result holds the best eps visited and an Inconclusive report.
EpsilonSearchResult search_epsilon(const NormalizedMatrix& m, const EpsilonSearchConfig& config = {});

struct FeasibilityRegion {
  int j = 1;
  std::array<double, 2> a_range{};
  std::array<double, 2> b_range{};
  int resolution_a = 0;
  int resolution_b = 0;
  /// Row-major, a outer: cell (i, k) is at i * resolution_b + k.
  std::vector<unsigned char> grid;
  std::vector<std::array<double, 2>> points;
  double lambda_a = 0.0;
  double lambda_b = 0.0;
  double d = 0.0;
  double d_p = 0.0;

  double a_node(int i) const;
  double b_node(int k) const;
  bool feasible_at(int i, int k) const { return grid[i * resolution_b + k] != 0; }
  bool empty() const { return points.empty(); }
  /// Feasibility of the grid node nearest to (a, b); false outside the ranges.
  bool contains(double a, double b) const;
};

/// Rasterises the feasible (a_j, b_j) set over the admissible rectangle with
/// inclusive node spacing. j is 1-based and at most min(n_A, n_B). The grid is
/// identical for every thread count. Throws NotApplicable.
FeasibilityRegion region_scan(const NormalizedMatrix& m, int j, std::array<int, 2> resolution,
                              int threads = 1, const Tolerances& tol = {});

/// Largest distance, in b-cells, between a row's raster edge and the analytic
/// curve, over rows whose analytic interval is nonempty.
double raster_boundary_error_cells(const FeasibilityRegion& region);

struct BoundarySample {
  double a;
  double b_lower;
  double b_upper;
};

std::vector<BoundarySample> boundary_curves(const FeasibilityRegion& region, int samples);

std::string region_grid_csv(const FeasibilityRegion& region);
std::string boundary_csv(const std::vector<BoundarySample>& samples);

/// Certificate from one (a_j, b_j) per coupled pair. Remaining b entries are
/// filled with the marginal symplectic eigenvalues, remaining a entries with
/// those of A. Throws InfeasiblePoint if the point does not certify.
SeparabilityCertificate assemble_certificate_from_region(const NormalizedMatrix& m,
                                                         const Vector& a_points,
                                                         const Vector& b_points,
                                                         const Tolerances& tol = {});

}  // namespace gsep
