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

#include <algorithm>
#include <cassert>
#include <cmath>

#include "cuspfusion/kernels.hpp"

namespace cuspfusion::kernels::scalar {

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double weighted_dot(std::span<const double> x, std::span<const double> y,
                    std::span<const double> w) {
  assert(x.size() == y.size() && x.size() == w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i] * w[i];
  return acc;
}

double max_stationarity_residual(std::span<const double> x, std::span<const double> a,
                                 std::span<const double> b) {
  assert(x.size() == a.size() && x.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(x[i] * x[i] * x[i] - b[i] * x[i] - a[i]));
  }
  return worst;
}

}  // namespace cuspfusion::kernels::scalar
