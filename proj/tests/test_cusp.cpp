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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "cuspfusion/cusp.hpp"
#include "cuspfusion/error.hpp"
#include "cuspfusion/nelder_mead.hpp"

using namespace cuspfusion;

namespace {

// Test-only root counter: sign changes of x^3 - b x - a on a fine grid.
// Independent of the closed-form solver.
int count_real_roots_by_scan(double a, double b) {
  int changes = 0;
  const auto f = [&](double x) { return x * x * x - b * x - a; };
  double prev = f(-10.0);
  for (int i = 1; i <= 200000; ++i) {
    const double x = -10.0 + 20.0 * i / 200000.0;
    const double cur = f(x);
    if ((prev < 0.0) != (cur < 0.0)) ++changes;
    prev = cur;
  }
  return changes;
}

}  // namespace

TEST_CASE("potential matches the quartic") {
  CHECK(potential(0.0, {0.0, 0.0}) == 0.0);
  CHECK(potential(1.0, {0.0, 1.0}) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(potential(1.0, {1.0, 0.0}) == doctest::Approx(-0.75).epsilon(1e-15));
}

TEST_CASE("gradient examples") {
  CHECK(gradient(0.0, {0.0, 0.0}) == 0.0);
  CHECK(gradient(1.0, {0.0, 1.0}) == 0.0);
  CHECK(gradient(2.0, {1.0, 1.0}) == 5.0);
}

TEST_CASE("gradient agrees with central differences of the potential") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), ua(-1.0, 1.0), ub(-2.0, 4.0);
  constexpr double h = 1e-5;
  for (int i = 0; i < 1000; ++i) {
    const double x = ux(rng);
    const CuspParams p{ua(rng), ub(rng)};
    const double fd = (potential(x + h, p) - potential(x - h, p)) / (2.0 * h);
    CHECK(std::abs(fd - gradient(x, p)) <= 1e-6);
  }
}

TEST_CASE("bistability classification") {
  CHECK(is_bistable({0.0, 3.0}) == Stability::Bistable);
  CHECK(is_bistable({2.1, 3.0}) == Stability::Monostable);
  CHECK(is_bistable({0.5, 1.0}) == Stability::Monostable);
  CHECK(count_real_roots_by_scan(0.5, 1.0) == 1);
  CHECK(is_bistable({0.0, -1.0}) == Stability::Monostable);
  CHECK(is_bistable({2.0, 3.0}) == Stability::Degenerate);
  CHECK(is_bistable({-2.0, 3.0}) == Stability::Degenerate);
  CHECK(is_bistable({0.0, 0.0}) == Stability::Monostable);
}

TEST_CASE("fold boundary") {
  CHECK(fold_boundary_b(0.0) == 0.0);
  CHECK(fold_boundary_b(0.5) == doctest::Approx(3.0 / (2.0 * std::cbrt(2.0))).epsilon(1e-15));
  CHECK(std::abs(fold_boundary_b(0.5) - 1.190551) <= 1e-6);
  CHECK(std::abs(fold_boundary_b(-0.5) - 1.190551) <= 1e-6);
  CHECK(fold_boundary_b(2.0) == doctest::Approx(3.0).epsilon(1e-15));

  SUBCASE("inverse of the cusp half-width and strictly increasing in |a|") {
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double a = 2.0 * i / 1000.0;
      const double b = fold_boundary_b(a);
      CHECK(b > prev);
      prev = b;
      CHECK(std::abs(2.0 * std::pow(b / 3.0, 1.5) - a) <= 1e-12);
      CHECK(fold_boundary_b(-a) == b);
    }
  }
}

TEST_CASE("critical points examples") {
  const auto two = critical_points({0.0, 1.0});
  REQUIRE(two.minima.size() == 2);
  CHECK(two.minima[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(two.minima[1] == doctest::Approx(1.0).epsilon(1e-14));
  REQUIRE(two.maximum);
  CHECK(std::abs(*two.maximum) <= 1e-14);
  CHECK_FALSE(two.degenerate);

  const auto origin = critical_points({0.0, 0.0});
  REQUIRE(origin.minima.size() == 1);
  CHECK(origin.minima[0] == 0.0);
  CHECK(origin.degenerate);
  CHECK_FALSE(origin.maximum);

  const auto one = critical_points({1.0, 0.0});
  REQUIRE(one.minima.size() == 1);
  CHECK(one.minima[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(one.maximum);

  const auto fold = critical_points({2.0, 3.0});
  CHECK(fold.degenerate);
  CHECK_FALSE(fold.maximum);
  REQUIRE(fold.minima.size() == 2);
  CHECK(fold.minima[0] == doctest::Approx(-1.0));
  CHECK(fold.minima[1] == doctest::Approx(2.0));
  CHECK(basin_minimum(-5.0, {2.0, 3.0}) == doctest::Approx(2.0));
}

TEST_CASE("critical point invariants and root-count agreement on random parameters") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(-2.0, 2.0), ub(-3.0, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const CuspParams p{ua(rng), ub(rng)};
    const auto cps = critical_points(p);
    REQUIRE(!cps.minima.empty());
    REQUIRE(cps.minima.size() <= 2);
    CHECK(cps.maximum.has_value() == (cps.minima.size() == 2 && !cps.degenerate));
    for (double x : cps.minima) {
      CHECK(std::abs(x * x * x - p.b * x - p.a) <= 1e-9);
      CHECK(3.0 * x * x - p.b >= -1e-9);
    }
    const Stability s = is_bistable(p);
    if (s == Stability::Degenerate) continue;
    CHECK((s == Stability::Bistable) == (cps.minima.size() == 2));
    // Skip scan comparisons when roots nearly coincide (grid cannot split them).
    if (std::abs(std::abs(p.a) - cusp_half_width(p.b)) > 1e-3) {
      CHECK(count_real_roots_by_scan(p.a, p.b) == (s == Stability::Bistable ? 3 : 1));
    }
  }
}

TEST_CASE("Nelder-Mead on a shifted parabola") {
  const auto r = nelder_mead_1d([](double x) { return (x - 3.0) * (x - 3.0); }, 0.0, {});
  CHECK(r.converged);
  CHECK(r.x == doctest::Approx(3.0).epsilon(1e-8));
  const auto capped =
      nelder_mead_1d([](double x) { return (x - 3.0) * (x - 3.0); }, 0.0, {0.1, 1e-10, 1e-12, 3});
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations == 3);
}

TEST_CASE("local minimum examples") {
  CHECK(std::abs(local_minimum_from(0.5, {0.0, 1.0}) - 1.0) <= 1e-6);
  CHECK(std::abs(local_minimum_from(-0.5, {0.0, 1.0}) + 1.0) <= 1e-6);
  for (double x0 = -1.0; x0 <= 1.0; x0 += 0.125) {
    CHECK(std::abs(local_minimum_from(x0, {1.0, 0.0}) - 1.0) <= 1e-6);
  }
}

TEST_CASE("local minimum agrees with the basin of the analytic solution") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), ua(-1.0, 1.0), ub(-2.0, 4.0);
  int bistable = 0;
  for (int i = 0; i < 10000; ++i) {
    const double x0 = ux(rng);
    const CuspParams p{ua(rng), ub(rng)};
    const double x = local_minimum_from(x0, p);
    const auto cps = critical_points(p);
    REQUIRE(std::abs(x - basin_minimum(x0, p)) <= 1e-6);
    REQUIRE(std::abs(gradient(x, p)) <= 1e-8);
    if (cps.maximum) {
      ++bistable;
      REQUIRE((x < *cps.maximum) == (x0 < *cps.maximum));
    }
  }
  CHECK(bistable > 4000);
}

TEST_CASE("local minimum is odd under (x0, a) -> (-x0, -a)") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), ua(-1.0, 1.0), ub(-2.0, 4.0);
  for (int i = 0; i < 2000; ++i) {
    const double x0 = ux(rng);
    const CuspParams p{ua(rng), ub(rng)};
    const double x = local_minimum_from(x0, p);
    const double mirrored = local_minimum_from(-x0, {-p.a, p.b});
    CHECK(std::abs(mirrored + x) <= 1e-8);
  }
}

TEST_CASE("minimizer errors") {
  MinimizerConfig tight;
  tight.max_iterations = 1;
  CHECK_THROWS_AS(local_minimum_from(0.3, {0.2, 2.0}, tight), ConvergenceFailure);

  MinimizerConfig bad;
  bad.x_tolerance = 0.0;
  CHECK_THROWS_AS(local_minimum_from(0.3, {0.2, 2.0}, bad), DomainError);
}

TEST_CASE("start at the maximum still lands on a minimum") {
  const CuspParams p{0.0, 1.0};
  const double x = local_minimum_from(0.0, p);
  CHECK(curvature(x, p) > 0.0);
  CHECK(std::abs(std::abs(x) - 1.0) <= 1e-8);
}
