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

#include <functional>

namespace cuspfusion {

struct NelderMeadOptions {
  double initial_step = 0.1;
  double x_tolerance = 1e-10;
  double f_tolerance = 1e-12;
  int max_iterations = 500;
};

struct NelderMeadResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// One-dimensional Nelder-Mead on the two-point simplex {x0, x0 + step} with
/// reflection 1, expansion 2, contraction 0.5 and shrink 0.5.
///
/// Terminates when both |x_worst - x_best| <= x_tolerance and
/// |f_worst - f_best| <= f_tolerance. The objective may return +inf to mark
/// infeasible points; those are never accepted as the best vertex unless the
/// start itself is infeasible.
NelderMeadResult nelder_mead_1d(const std::function<double(double)>& objective,
                                double x0, const NelderMeadOptions& options);

}  // namespace cuspfusion
