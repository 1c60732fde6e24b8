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

// Origin-centred ellipsoids {z : Q z.z <= level}, their shadows on coordinate
// subspaces and containment tests against quantum blobs.

#pragma once

#include <array>
#include <vector>

#include "gsep/gaussian_state.hpp"

namespace gsep {

struct Ellipsoid {
  Ellipsoid(const Matrix& q, double level);

  Matrix q;
  double level;

  int dim() const { return static_cast<int>(q.rows()); }
};

/// Covariance ellipsoid {M z.z <= hbar} of a state.
Ellipsoid covariance_ellipsoid(const NormalizedMatrix& m);

/// Eliminated blocks with condition number above this raise SingularBlock.
inline constexpr double kMaxSchurCondition = 1e12;

/// M/M_BB (keep A) or M/M_AA (keep B).
Matrix schur_complement(const NormalizedMatrix& m, Subsystem keep);
/// Schur complement of a symmetric matrix onto the listed coordinates.
Matrix schur_complement(const Matrix& m, const std::vector<int>& keep);

Ellipsoid project_ellipsoid(const Ellipsoid& omega, const BipartiteSplit& split, Subsystem onto);
/// Orthogonal shadow on the span of the listed coordinates, in that order.
Ellipsoid project_onto_coordinates(const Ellipsoid& omega, const std::vector<int>& coords);

/// inner is a subset of outer.
bool ellipsoid_contains(const Ellipsoid& outer, const Ellipsoid& inner, double tol = 1e-10);

/// Omega contains some symplectic image of the ball of radius sqrt(hbar).
bool contains_quantum_blob(const Ellipsoid& omega, const SymplecticForm& j, double hbar,
                           double tol = 1e-10);

/// The blob S B(sqrt(hbar)) as an ellipsoid: Q = (S S^T)^{-1}, level hbar.
Ellipsoid blob_ellipsoid(const Matrix& s, double hbar);

/// A symplectic S with S B(sqrt(hbar)) inside {m z.z <= hbar}. m must have
/// every symplectic eigenvalue <= 1 for the inclusion to hold.
Matrix enclosed_blob(const Matrix& m);

/// Projections of (S_A (+) S_B) B(sqrt(hbar)) lie in the projections of omega.
/// Throws NotSymplectic if either factor fails is_symplectic at 1e-9.
bool blob_projection_check(const Matrix& s_a, const Matrix& s_b, const Ellipsoid& omega,
                           const BipartiteSplit& split, double tol = 1e-10);

double ellipsoid_volume(const Ellipsoid& omega);
/// Volume of a quantum blob in 2m dimensions: (pi hbar)^m / m!.
double blob_volume(int modes, double hbar);

/// Boundary of the planar ellipse {Q z.z = level} sampled at `points` angles.
std::vector<std::array<double, 2>> ellipse_polyline(const Matrix& q2, double level, int points);

}  // namespace gsep
