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

#include "cuspfusion/nelder_mead.hpp"

#include <cmath>
#include <utility>

namespace cuspfusion {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

NelderMeadResult nelder_mead_1d(const std::function<double(double)>& objective,
                                double x0, const NelderMeadOptions& options) {
  double best = x0;
  double worst = x0 + options.initial_step;
  double f_best = objective(best);
  double f_worst = objective(worst);

  NelderMeadResult result;
  for (int iter = 0;; ++iter) {
    if (f_worst < f_best) {
      std::swap(best, worst);
      std::swap(f_best, f_worst);
    }
    if (std::abs(worst - best) <= options.x_tolerance &&
        std::abs(f_worst - f_best) <= options.f_tolerance) {
      result.converged = true;
      result.iterations = iter;
      break;
    }
    if (iter >= options.max_iterations) {
      result.iterations = iter;
      break;
    }

    // With one dimension the centroid of all but the worst vertex is `best`,
    // which is also the second-worst vertex.
    const double reflected = best + kReflect * (best - worst);
    const double f_reflected = objective(reflected);

    if (f_reflected < f_best) {
      const double expanded = best + kExpand * (reflected - best);
      const double f_expanded = objective(expanded);
      if (f_expanded < f_reflected) {
        worst = expanded;
        f_worst = f_expanded;
      } else {
        worst = reflected;
        f_worst = f_reflected;
      }
      continue;
    }

    if (f_reflected < f_worst) {
      const double outside = best + kContract * (reflected - best);
      const double f_outside = objective(outside);
      if (f_outside <= f_reflected) {
        worst = outside;
        f_worst = f_outside;
        continue;
      }
    } else {
      const double inside = best + kContract * (worst - best);
      const double f_inside = objective(inside);
      if (f_inside < f_worst) {
        worst = inside;
        f_worst = f_inside;
        continue;
      }
    }

    worst = best + kShrink * (worst - best);
    f_worst = objective(worst);
  }

  result.x = best;
  result.fx = f_best;
  return result;
}

}  // namespace cuspfusion
