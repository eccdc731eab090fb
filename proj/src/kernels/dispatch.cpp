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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "cuspfusion/kernels.hpp"

namespace cuspfusion::kernels {

namespace {

struct Table {
  Backend backend;
  double (*dot)(std::span<const double>, std::span<const double>);
  void (*axpy)(double, std::span<const double>, std::span<double>);
  double (*weighted_dot)(std::span<const double>, std::span<const double>,
                         std::span<const double>);
  double (*max_stationarity_residual)(std::span<const double>, std::span<const double>,
                                      std::span<const double>);
};

constexpr Table kScalar{Backend::Scalar, scalar::dot, scalar::axpy, scalar::weighted_dot,
                        scalar::max_stationarity_residual};
#if defined(CUSPFUSION_HAVE_AVX2)
constexpr Table kAvx2{Backend::Avx2, avx2::dot, avx2::axpy, avx2::weighted_dot,
                      avx2::max_stationarity_residual};
#endif

const Table* table_for(Backend b) {
#if defined(CUSPFUSION_HAVE_AVX2)
  if (b == Backend::Avx2) return &kAvx2;
#endif
  (void)b;
  return &kScalar;
}

const Table* initial_table() {
  if (const char* env = std::getenv("CUSPFUSION_SIMD"); env && std::string(env) == "scalar") {
    return &kScalar;
  }
  return backend_supported(Backend::Avx2) ? table_for(Backend::Avx2) : &kScalar;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> table{initial_table()};
  return table;
}

}  // namespace

std::string_view to_string(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

bool backend_supported(Backend b) noexcept {
  if (b == Backend::Scalar) return true;
#if defined(CUSPFUSION_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() noexcept { return current().load(std::memory_order_acquire)->backend; }

void set_backend(Backend b) {
  if (!backend_supported(b)) {
    throw std::invalid_argument("SIMD backend not supported on this CPU: " +
                                std::string(to_string(b)));
  }
  current().store(table_for(b), std::memory_order_release);
}

double dot(std::span<const double> x, std::span<const double> y) {
  return current().load(std::memory_order_acquire)->dot(x, y);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  current().load(std::memory_order_acquire)->axpy(alpha, x, y);
}

double weighted_dot(std::span<const double> x, std::span<const double> y,
                    std::span<const double> w) {
  return current().load(std::memory_order_acquire)->weighted_dot(x, y, w);
}

double max_stationarity_residual(std::span<const double> x, std::span<const double> a,
                                 std::span<const double> b) {
  return current().load(std::memory_order_acquire)->max_stationarity_residual(x, a, b);
}

}  // namespace cuspfusion::kernels
