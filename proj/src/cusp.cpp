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

#include "cuspfusion/cusp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cuspfusion/error.hpp"
#include "cuspfusion/nelder_mead.hpp"

namespace cuspfusion {

namespace {

double cubic_residual(double x, CuspParams p) { return x * x * x - p.b * x - p.a; }

// Newton refinement of a root of x^3 - b x - a. Steps are only taken while
// they shrink the residual, so near-double roots are left alone.
double polish_root(double x, CuspParams p) {
  for (int i = 0; i < 4; ++i) {
    const double r = cubic_residual(x, p);
    const double slope = 3.0 * x * x - p.b;
    if (r == 0.0 || slope == 0.0) break;
    const double next = x - r / slope;
    if (std::abs(cubic_residual(next, p)) >= std::abs(r)) break;
    x = next;
  }
  return x;
}

// V(anchor + h) - V(anchor), expanded exactly around the anchor so that
// values near a minimum keep full relative precision.
double potential_delta(double anchor, double x, CuspParams p) {
  const double h = x - anchor;
  const double slope = anchor * anchor * anchor - p.a - p.b * anchor;
  const double half_curv = 0.5 * (3.0 * anchor * anchor - p.b);
  return h * (slope + h * (half_curv + h * (anchor + 0.25 * h)));
}

void validate(const MinimizerConfig& cfg) {
  if (!(cfg.initial_step > 0.0) || !(cfg.x_tolerance > 0.0) || !(cfg.f_tolerance > 0.0)) {
    throw DomainError("minimizer step and tolerances must be positive");
  }
  if (cfg.max_iterations < 1) throw DomainError("minimizer max_iterations must be >= 1");
}

}  // namespace

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::Monostable:
      return "monostable";
    case Stability::Bistable:
      return "bistable";
    case Stability::Degenerate:
      return "degenerate";
  }
  return "unknown";
}

double potential(double x, CuspParams p) noexcept {
  return x * x * x * x / 4.0 - p.a * x - p.b * x * x / 2.0;
}

double gradient(double x, CuspParams p) noexcept { return x * x * x - p.a - p.b * x; }

double curvature(double x, CuspParams p) noexcept { return 3.0 * x * x - p.b; }

double cusp_half_width(double b) noexcept {
  if (!(b > 0.0)) return 0.0;
  const double s = b / 3.0;
  return 2.0 * s * std::sqrt(s);
}

Stability is_bistable(CuspParams p) noexcept {
  if (!(p.b > 0.0)) return Stability::Monostable;
  const double gap = std::abs(p.a) - cusp_half_width(p.b);
  if (std::abs(gap) <= kFoldTolerance) return Stability::Degenerate;
  return gap < 0.0 ? Stability::Bistable : Stability::Monostable;
}

double fold_boundary_b(double a) noexcept {
  const double c = std::cbrt(std::abs(a) / 2.0);
  return 3.0 * c * c;
}

CriticalPointSet critical_points(CuspParams p) {
  CriticalPointSet out;
  if (p.a == 0.0 && p.b == 0.0) {
    out.minima = {0.0};
    out.degenerate = true;
    return out;
  }

  switch (is_bistable(p)) {
    case Stability::Degenerate: {
      // Saddle-node: a double root on the -sign(a) side merges the vanishing
      // minimum with the maximum; the simple root is the surviving minimum.
      const double s = std::sqrt(p.b / 3.0);
      const double sign = p.a >= 0.0 ? 1.0 : -1.0;
      const double simple = polish_root(2.0 * sign * s, p);
      const double fold = -sign * s;
      out.minima = {std::min(simple, fold), std::max(simple, fold)};
      out.degenerate = true;
      return out;
    }
    case Stability::Bistable: {
      const double radius = 2.0 * std::sqrt(p.b / 3.0);
      const double arg = std::clamp(p.a / cusp_half_width(p.b), -1.0, 1.0);
      const double theta = std::acos(arg) / 3.0;
      constexpr double kThird = 2.0 * std::numbers::pi / 3.0;
      double r[3];
      for (int k = 0; k < 3; ++k) r[k] = polish_root(radius * std::cos(theta - kThird * k), p);
      std::sort(r, r + 3);
      out.minima = {r[0], r[2]};
      out.maximum = r[1];
      return out;
    }
    case Stability::Monostable:
      break;
  }

  // Cardano with the larger-magnitude branch to avoid cancellation; the
  // second cube root follows from u * v = (b/3)^3.
  const double disc = std::sqrt(p.a * p.a / 4.0 - p.b * p.b * p.b / 27.0);
  const double u = p.a / 2.0 + std::copysign(disc, p.a);
  const double t = std::cbrt(u);
  const double x = t + (p.b / 3.0) / t;
  out.minima = {polish_root(x, p)};
  return out;
}

double basin_minimum(double x0, CuspParams p) {
  const CriticalPointSet cps = critical_points(p);
  if (cps.maximum) return x0 < *cps.maximum ? cps.minima[0] : cps.minima[1];
  if (cps.minima.size() == 2) {
    // Fold point: every start drains into the simple root.
    return std::abs(curvature(cps.minima[0], p)) > std::abs(curvature(cps.minima[1], p))
               ? cps.minima[0]
               : cps.minima[1];
  }
  return cps.minima.front();
}

double local_minimum_from(double x0, CuspParams p, const MinimizerConfig& cfg) {
  validate(cfg);

  std::optional<double> barrier;
  if (is_bistable(p) == Stability::Bistable) barrier = critical_points(p).maximum;

  const auto search = [&](double start) {
    const bool right = barrier && start >= *barrier;
    const auto feasible = [&](double x) {
      if (!barrier) return true;
      return right ? x >= *barrier : x < *barrier;
    };

    NelderMeadOptions opts{cfg.initial_step, cfg.x_tolerance, cfg.f_tolerance,
                           cfg.max_iterations};
    const auto run = [&](double anchor, const NelderMeadOptions& o) {
      const auto objective = [&](double x) {
        return feasible(x) ? potential_delta(anchor, x, p)
                           : std::numeric_limits<double>::infinity();
      };
      const NelderMeadResult r = nelder_mead_1d(objective, anchor, o);
      if (!r.converged) {
        throw ConvergenceFailure("Nelder-Mead did not converge within " +
                                 std::to_string(o.max_iterations) + " iterations");
      }
      return r.x;
    };

    const double coarse = run(start, opts);
    // Re-anchor at the coarse answer: the residual error there is below the
    // resolution of V itself, but not of V - V(coarse).
    opts.initial_step = std::max(1e-4 * cfg.initial_step, 1e3 * cfg.x_tolerance);
    if (!feasible(coarse + opts.initial_step)) opts.initial_step = -opts.initial_step;
    return run(coarse, opts);
  };

  double x = search(x0);
  if (curvature(x, p) < -kCurvatureTolerance) {
    const double restart = barrier && x0 + 0.5 >= *barrier && x0 < *barrier ? x0 - 0.5 : x0 + 0.5;
    x = search(restart);
    if (curvature(x, p) < -kCurvatureTolerance) {
      throw CurvatureFailure("minimizer converged to a point of negative curvature");
    }
  }
  if (std::abs(gradient(x, p)) > kStationarityTolerance) {
    throw ConvergenceFailure("minimizer result is not stationary (|dV/dx| = " +
                             std::to_string(std::abs(gradient(x, p))) + ")");
  }
  return x;
}

}  // namespace cuspfusion
