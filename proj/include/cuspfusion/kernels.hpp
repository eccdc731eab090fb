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

// Data-parallel inner loops. Every kernel has a scalar reference in
// kernels::scalar and, on x86-64, an AVX2+FMA variant in kernels::avx2. The
// free functions dispatch to the best variant the running CPU supports;
// setting CUSPFUSION_SIMD=scalar in the environment pins the reference path.

#include <span>
#include <string_view>

namespace cuspfusion::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend b);

bool backend_supported(Backend b) noexcept;

/// Backend currently used by the dispatching entry points.
Backend active_backend() noexcept;

/// Overrides the dispatch target. Throws std::invalid_argument if unsupported.
void set_backend(Backend b);

/// sum_i x[i] * y[i]
double dot(std::span<const double> x, std::span<const double> y);

/// y[i] += alpha * x[i]
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// sum_i x[i] * y[i] * w[i]
double weighted_dot(std::span<const double> x, std::span<const double> y,
                    std::span<const double> w);

/// max_i |x[i]^3 - b[i] x[i] - a[i]|
double max_stationarity_residual(std::span<const double> x, std::span<const double> a,
                                 std::span<const double> b);

namespace scalar {
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double weighted_dot(std::span<const double> x, std::span<const double> y,
                    std::span<const double> w);
double max_stationarity_residual(std::span<const double> x, std::span<const double> a,
                                 std::span<const double> b);
}  // namespace scalar

#if defined(CUSPFUSION_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double weighted_dot(std::span<const double> x, std::span<const double> y,
                    std::span<const double> w);
double max_stationarity_residual(std::span<const double> x, std::span<const double> a,
                                 std::span<const double> b);
}  // namespace avx2
#endif

}  // namespace cuspfusion::kernels
