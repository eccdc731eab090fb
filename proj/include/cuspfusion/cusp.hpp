// Copyright 2026 The cuspfusion Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace cuspfusion {

/// Control parameters of the cusp potential V(x; a, b) = x^4/4 - a x - b x^2/2.
/// `a` is the demographic index, `b` the behavior index.
struct CuspParams {
  double a = 0.0;
  double b = 0.0;
};

enum class Stability { Monostable, Bistable, Degenerate };

std::string_view to_string(Stability s);

/// Stationary points of V, found from the closed-form cubic solution.
struct CriticalPointSet {
  std::vector<double> minima;     // ascending, 1 or 2 entries
  std::optional<double> maximum;  // present iff two proper minima
  bool degenerate = false;        // repeated root (fold point or the cusp origin)
};

struct MinimizerConfig {
  double initial_step = 0.1;
  double x_tolerance = 1e-10;
  double f_tolerance = 1e-12;
  int max_iterations = 500;
};

/// Classification tolerance on the distance to the cusp curve.
inline constexpr double kFoldTolerance = 1e-12;

/// Tolerances of the minimizer's post-conditions.
inline constexpr double kStationarityTolerance = 1e-8;
inline constexpr double kCurvatureTolerance = 1e-8;

double potential(double x, CuspParams p) noexcept;
double gradient(double x, CuspParams p) noexcept;
double curvature(double x, CuspParams p) noexcept;

/// Bistable iff b > 0 and |a| < 2 (b/3)^(3/2) - tol; degenerate when |a| is
/// within tol of that bound (b > 0); monostable otherwise.
Stability is_bistable(CuspParams p) noexcept;

/// Half-width in `a` of the bistable region at a given b: 2 (b/3)^(3/2), 0 for b <= 0.
double cusp_half_width(double b) noexcept;

/// Smallest b at which (a, b) sits on the cusp curve: 3 (|a|/2)^(2/3).
double fold_boundary_b(double a) noexcept;

/// All real roots of x^3 - b x - a, split into minima and the maximum.
CriticalPointSet critical_points(CuspParams p);

/// The analytic minimum reached by gradient descent from x0. In the bistable
/// case this is the minimum on x0's side of the maximum (x0 == maximum goes
/// right).
double basin_minimum(double x0, CuspParams p);

/// Nelder-Mead search for the local minimum of V whose basin holds x0.
///
/// Throws ConvergenceFailure when the iteration budget runs out or the
/// result is not stationary to 1e-8, and CurvatureFailure when the result has
/// negative curvature after one restart from x0 +/- 0.5.
double local_minimum_from(double x0, CuspParams p, const MinimizerConfig& cfg = {});

}  // namespace cuspfusion
