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

#include "gsep/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

namespace gsep {

namespace {

// Precomputed SVD so that each objective evaluation is two small spectra.
class ScaledBounds {
 public:
  explicit ScaledBounds(const NormalizedMatrix& m)
      : svd_(singular_value_decomposition(m.ab())),
        k_(2 * std::min(m.split().n_a(), m.split().n_b())),
        ja_(SymplecticForm::for_subsystem(m.split(), Subsystem::A)),
        jb_(SymplecticForm::for_subsystem(m.split(), Subsystem::B)),
        aa_(m.aa()), bb_(m.bb()) {}

  int size() const { return k_; }

  double operator()(const Vector& eps) const {
    Vector sa = Vector::Zero(aa_.rows());
    Vector sb = Vector::Zero(bb_.rows());
    for (int i = 0; i < k_; ++i) {
      sa(i) = eps(i) * svd_.values(i);
      sb(i) = svd_.values(i) / eps(i);
    }
    const Matrix bound_a = aa_ + svd_.u * sa.asDiagonal() * svd_.u.transpose();
    const Matrix bound_b = bb_ + svd_.v * sb.asDiagonal() * svd_.v.transpose();
    return std::max(symplectic_eigenvalues(bound_a, ja_).front(),
                    symplectic_eigenvalues(bound_b, jb_).front());
  }

 private:
  SingularValueDecomposition svd_;
  int k_;
  SymplecticForm ja_;
  SymplecticForm jb_;
  Matrix aa_;
  Matrix bb_;
};

void validate_config(const EpsilonSearchConfig& c) {
  if (!(c.eps_min > 0.0) || !(c.eps_min < c.eps_max)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon range must satisfy 0 < eps_min < eps_max");
  }
  if (c.scalar_grid < 2) throw Error(ErrorCode::InvalidArgument, "scalar grid needs 2 points");
  if (c.max_iters < 0) throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 0");
}

}  // namespace

double epsilon_objective(const NormalizedMatrix& m, const Vector& epsilon) {
  ScaledBounds g(m);
  if (epsilon.size() != g.size()) {
    throw Error(ErrorCode::InvalidEpsilon, "epsilon must have " + std::to_string(g.size()) + " entries");
  }
  for (int i = 0; i < epsilon.size(); ++i) {
    if (!(epsilon(i) > 0.0)) throw Error(ErrorCode::InvalidEpsilon, "epsilon entries must be positive");
  }
  return g(epsilon);
}

EpsilonSearchResult search_epsilon(const NormalizedMatrix& m, const EpsilonSearchConfig& config) {
  validate_config(config);
  const ScaledBounds g(m);
  const int k = g.size();
  const double target = 1.0 + config.tol.spectral;
  const double lo = std::log(config.eps_min);
  const double hi = std::log(config.eps_max);

  EpsilonSearchResult out;
  out.objective = std::numeric_limits<double>::infinity();
  bool done = false;
  auto visit = [&](const Vector& log_eps) {
    const Vector eps = log_eps.array().exp();
    const double value = g(eps);
    ++out.evaluations;
    if (!done && value <= target) {
      done = true;
      out.found = true;
      out.epsilon = eps;
      out.objective = value;
    } else if (!done && value < out.objective) {
      out.epsilon = eps;
      out.objective = value;
    }
    return value;
  };

  Vector best_log = Vector::Constant(k, lo);
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < config.scalar_grid && !done; ++i) {
    const double t = lo + (hi - lo) * i / (config.scalar_grid - 1);
    const Vector x = Vector::Constant(k, t);
    const double v = visit(x);
    if (v < best_value) {
      best_value = v;
      best_log = x;
    }
  }

  if (!done && config.strategy == EpsilonStrategy::CoordinateDescent) {
    constexpr double kGolden = 0.6180339887498949;
    for (int sweep = 0; sweep < config.max_iters && !done; ++sweep) {
      const double start = best_value;
      for (int c = 0; c < k && !done; ++c) {
        double a = lo, b = hi;
        Vector x = best_log;
        auto at = [&](double t) {
          x(c) = t;
          return visit(x);
        };
        double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
        double f1 = at(x1), f2 = at(x2);
        for (int it = 0; it < 40 && !done; ++it) {
          if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = at(x1);
          } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = at(x2);
          }
        }
        const double t = f1 < f2 ? x1 : x2;
        const double f = std::min(f1, f2);
        if (f < best_value) {
          best_value = f;
          best_log(c) = t;
        }
      }
      if (start - best_value < config.objective_tol) break;
    }
  }

  if (!done && config.strategy == EpsilonStrategy::NelderMeadLike) {
    auto clamp = [&](Vector x) { return Vector(x.cwiseMax(lo).cwiseMin(hi)); };
    std::vector<Vector> simplex{best_log};
    for (int c = 0; c < k; ++c) {
      Vector x = best_log;
      x(c) += (x(c) + 0.5 <= hi) ? 0.5 : -0.5;
      simplex.push_back(clamp(x));
    }
    std::vector<double> f;
    for (const auto& x : simplex) f.push_back(visit(x));
    for (int it = 0; it < config.max_iters * (k + 1) && !done; ++it) {
      std::vector<int> idx(simplex.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
      std::stable_sort(idx.begin(), idx.end(), [&](int p, int q) { return f[p] < f[q]; });
      const int worst = idx.back();
      const int second = idx[idx.size() - 2];
      const int best = idx.front();
      if (f[worst] - f[best] < config.objective_tol) break;
      Vector centroid = Vector::Zero(k);
      for (int i : idx)
        if (i != worst) centroid += simplex[i];
      centroid /= k;
      const Vector xr = clamp(centroid + (centroid - simplex[worst]));
      const double fr = visit(xr);
      if (fr < f[best]) {
        const Vector xe = clamp(centroid + 2.0 * (centroid - simplex[worst]));
        const double fe = visit(xe);
        if (fe < fr) {
          simplex[worst] = xe;
          f[worst] = fe;
        } else {
          simplex[worst] = xr;
          f[worst] = fr;
        }
      } else if (fr < f[second]) {
        simplex[worst] = xr;
        f[worst] = fr;
      } else {
        const Vector xc = clamp(centroid + 0.5 * (simplex[worst] - centroid));
        const double fc = visit(xc);
        if (fc < f[worst]) {
          simplex[worst] = xc;
          f[worst] = fc;
        } else {
          for (int i : idx) {
            if (i == best) continue;
            simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
            f[i] = visit(simplex[i]);
          }
        }
      }
    }
  }

  out.report = criterion3(m, out.epsilon, config.tol);
  return out;
}

double FeasibilityRegion::a_node(int i) const {
  return a_range[0] + (a_range[1] - a_range[0]) * i / (resolution_a - 1);
}

double FeasibilityRegion::b_node(int k) const {
  return b_range[0] + (b_range[1] - b_range[0]) * k / (resolution_b - 1);
}

bool FeasibilityRegion::contains(double a, double b) const {
  const double da = (a_range[1] - a_range[0]) / (resolution_a - 1);
  const double db = (b_range[1] - b_range[0]) / (resolution_b - 1);
  if (a < a_range[0] - 0.5 * da || a > a_range[1] + 0.5 * da) return false;
  if (b < b_range[0] - 0.5 * db || b > b_range[1] + 0.5 * db) return false;
  const int i = da > 0 ? static_cast<int>(std::lround((a - a_range[0]) / da)) : 0;
  const int k = db > 0 ? static_cast<int>(std::lround((b - b_range[0]) / db)) : 0;
  return feasible_at(std::clamp(i, 0, resolution_a - 1), std::clamp(k, 0, resolution_b - 1));
}

FeasibilityRegion region_scan(const NormalizedMatrix& m, int j, std::array<int, 2> resolution,
                              int threads, const Tolerances& tol) {
  const auto setup = criterion4_applicable(m, tol);
  if (!setup.applicable) throw Error(ErrorCode::NotApplicable, setup.detail);
  const int k = std::min(m.split().n_a(), m.split().n_b());
  if (j < 1 || j > k) {
    throw Error(ErrorCode::InvalidArgument, "j must lie in [1, " + std::to_string(k) + "]");
  }
  if (resolution[0] < 2 || resolution[1] < 2) {
    throw Error(ErrorCode::InvalidArgument, "grid resolution must be at least 2x2");
  }
  FeasibilityRegion r;
  r.j = j;
  r.lambda_a = setup.lambda_a(j - 1);
  r.lambda_b = setup.lambda_b(j - 1);
  r.d = setup.d(j - 1);
  r.d_p = setup.d(k + j - 1);
  if (r.lambda_a > 1.0 || r.lambda_b > 1.0) {
    throw Error(ErrorCode::NotApplicable, "admissible (a, b) rectangle is empty");
  }
  r.a_range = {r.lambda_a, 1.0 / r.lambda_a};
  r.b_range = {r.lambda_b, 1.0 / r.lambda_b};
  r.resolution_a = resolution[0];
  r.resolution_b = resolution[1];
  r.grid.assign(static_cast<std::size_t>(r.resolution_a) * r.resolution_b, 0);

  auto fill_rows = [&r, &tol](int first, int stride) {
    for (int i = first; i < r.resolution_a; i += stride) {
      const double a = r.a_node(i);
      for (int kk = 0; kk < r.resolution_b; ++kk) {
        const auto [dq, dp] =
            criterion4_determinants(r.lambda_a, r.lambda_b, r.d, r.d_p, a, r.b_node(kk));
        r.grid[i * r.resolution_b + kk] = (dq >= -tol.spectral && dp >= -tol.spectral) ? 1 : 0;
      }
    }
  };
  threads = std::clamp(threads, 1, r.resolution_a);
  if (threads == 1) {
    fill_rows(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(fill_rows, t, threads);
    for (auto& th : pool) th.join();
  }
  for (int i = 0; i < r.resolution_a; ++i)
    for (int kk = 0; kk < r.resolution_b; ++kk)
      if (r.feasible_at(i, kk)) r.points.push_back({r.a_node(i), r.b_node(kk)});
  return r;
}

double raster_boundary_error_cells(const FeasibilityRegion& r) {
  const double db = (r.b_range[1] - r.b_range[0]) / (r.resolution_b - 1);
  double worst = 0.0;
  for (int i = 0; i < r.resolution_a; ++i) {
    const double a = r.a_node(i);
    const double lo = std::max(r.b_range[0], region_lower_curve(r.lambda_a, r.lambda_b, r.d, a));
    const double hi = std::min(r.b_range[1], region_upper_curve(r.lambda_a, r.lambda_b, r.d_p, a));
    int first = -1, last = -1;
    for (int k = 0; k < r.resolution_b; ++k) {
      if (r.feasible_at(i, k)) {
        if (first < 0) first = k;
        last = k;
      }
    }
    if (lo <= hi) {
      if (first < 0) {
        worst = std::max(worst, (hi - lo) / db);
      } else {
        worst = std::max(worst, std::abs(r.b_node(first) - lo) / db);
        worst = std::max(worst, std::abs(r.b_node(last) - hi) / db);
      }
    } else if (first >= 0) {
      worst = std::max(worst, std::isfinite(lo - hi) ? (lo - hi) / db
                                                      : std::numeric_limits<double>::infinity());
    }
  }
  return worst;
}

std::vector<BoundarySample> boundary_curves(const FeasibilityRegion& r, int samples) {
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 boundary samples");
  std::vector<BoundarySample> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double a = r.a_range[0] + (r.a_range[1] - r.a_range[0]) * i / (samples - 1);
    out.push_back({a, region_lower_curve(r.lambda_a, r.lambda_b, r.d, a),
                   region_upper_curve(r.lambda_a, r.lambda_b, r.d_p, a)});
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string region_grid_csv(const FeasibilityRegion& r) {
  std::string out = "a,b,feasible\n";
  for (int i = 0; i < r.resolution_a; ++i) {
    const std::string a = fmt(r.a_node(i));
    for (int k = 0; k < r.resolution_b; ++k) {
      out += a;
      out += ',';
      out += fmt(r.b_node(k));
      out += r.feasible_at(i, k) ? ",1\n" : ",0\n";
    }
  }
  return out;
}

std::string boundary_csv(const std::vector<BoundarySample>& samples) {
  std::string out = "a,b_lower,b_upper\n";
  for (const auto& s : samples) out += fmt(s.a) + "," + fmt(s.b_lower) + "," + fmt(s.b_upper) + "\n";
  return out;
}

SeparabilityCertificate assemble_certificate_from_region(const NormalizedMatrix& m,
                                                         const Vector& a_points,
                                                         const Vector& b_points,
                                                         const Tolerances& tol) {
  const auto setup = criterion4_applicable(m, tol);
  if (!setup.applicable) throw Error(ErrorCode::NotApplicable, setup.detail);
  const int k = std::min(m.split().n_a(), m.split().n_b());
  if (a_points.size() != k || b_points.size() != k) {
    throw Error(ErrorCode::DimensionMismatch, "one (a, b) point per coupled pair is required");
  }
  Vector a = setup.lambda_a;
  Vector b = setup.lambda_b;
  a.head(k) = a_points;
  b.head(k) = b_points;
  SeparabilityReport r;
  try {
    r = criterion4(m, setup, a, b, tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::RangeViolation) throw Error(ErrorCode::InfeasiblePoint, e.what());
    throw;
  }
  if (r.verdict != Verdict::Separable) {
    throw Error(ErrorCode::InfeasiblePoint,
                r.witness ? r.witness->detail : std::string("point does not certify"));
  }
  return *r.certificate;
}

}  // namespace gsep
