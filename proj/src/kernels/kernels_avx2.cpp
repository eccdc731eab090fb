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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cassert>
#include <cmath>

#include "cuspfusion/kernels.hpp"

namespace cuspfusion::kernels::avx2 {

namespace {

inline double reduce_add(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline double reduce_max(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(&x[i + 4]), _mm256_loadu_pd(&y[i + 4]), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]), acc0);
  }
  double acc = reduce_add(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(&y[i], _mm256_fmadd_pd(va, _mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i])));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double weighted_dot(std::span<const double> x, std::span<const double> y,
                    std::span<const double> w) {
  assert(x.size() == y.size() && x.size() == w.size());
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d xy0 = _mm256_mul_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]));
    const __m256d xy1 = _mm256_mul_pd(_mm256_loadu_pd(&x[i + 4]), _mm256_loadu_pd(&y[i + 4]));
    acc0 = _mm256_fmadd_pd(xy0, _mm256_loadu_pd(&w[i]), acc0);
    acc1 = _mm256_fmadd_pd(xy1, _mm256_loadu_pd(&w[i + 4]), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d xy = _mm256_mul_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]));
    acc0 = _mm256_fmadd_pd(xy, _mm256_loadu_pd(&w[i]), acc0);
  }
  double acc = reduce_add(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i] * w[i];
  return acc;
}

double max_stationarity_residual(std::span<const double> x, std::span<const double> a,
                                 std::span<const double> b) {
  assert(x.size() == a.size() && x.size() == b.size());
  const std::size_t n = x.size();
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d worst = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(&x[i]);
    const __m256d vb = _mm256_loadu_pd(&b[i]);
    const __m256d va = _mm256_loadu_pd(&a[i]);
    // (x^2 - b) * x - a
    const __m256d r =
        _mm256_sub_pd(_mm256_mul_pd(_mm256_fmsub_pd(vx, vx, vb), vx), va);
    worst = _mm256_max_pd(worst, _mm256_andnot_pd(sign_mask, r));
  }
  double out = reduce_max(worst);
  for (; i < n; ++i) out = std::max(out, std::abs(x[i] * x[i] * x[i] - b[i] * x[i] - a[i]));
  return out;
}

}  // namespace cuspfusion::kernels::avx2
